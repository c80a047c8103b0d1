#include "mvopr/moments.hpp"

#include "mvopr/errors.hpp"
#include "mvopr/shift.hpp"

namespace mvopr {

MomentMatrix moment_matrix(const MeasureSpec &spec, const FlowState &state,
                           int L, int B, const QuadratureRule &rule)
{
	const int D = spec.D;
	const int LT = L + B;
	BlockStructure str(D, LT);

	// Precompute the level bases once.
	std::vector<LevelBasis> bases;
	bases.reserve(LT);
	for (int k = 0; k < LT; ++k)
		bases.push_back(enumerate_level(D, k));

	// Kahan-compensated rank-one accumulation in fixed node order.
	Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(str.total, str.total);
	Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(str.total, str.total);
	Eigen::VectorXd chi(str.total);
	for (long j = 0; j < rule.weights.size(); ++j) {
		Eigen::VectorXd x = rule.nodes.row(j);
		const double w = rule.weights[j] * deformed_weight(x, state);
		for (int k = 0; k < LT; ++k)
			chi.segment(str.offsets[k], str.sizes[k]) =
			    eval_chi_level(bases[k], x);
		Eigen::MatrixXd term = w * (chi * chi.transpose());
		Eigen::MatrixXd y = term - comp;
		Eigen::MatrixXd t = sum + y;
		comp = (t - sum) - y;
		sum = t;
	}
	sum = 0.5 * (sum + sum.transpose().eval());

	MomentMatrix M;
	M.G = BlockMatrix(str, std::move(sum));
	M.L = L;
	M.B = B;
	return M;
}

BlockMatrix moment_time_derivative(const MomentMatrix &M,
                                   const MultiIndex &qtime)
{
	const int d = degree(qtime);
	if (d > M.B)
		throw OutOfRange("moment_time_derivative: buffer too small");
	const BlockStructure &s = M.G.structure();
	const int Lout = M.total_levels() - d;
	BlockMatrix lam = lambda_power(s.D, M.total_levels(), qtime);
	Eigen::MatrixXd full = lam.dense() * M.G.dense();
	BlockStructure so(s.D, Lout);
	return BlockMatrix(so, full.topLeftCorner(so.total, so.total));
}

BlockMatrix discrete_step_matrix(const MomentMatrix &M,
                                 const FlowState &state, int a)
{
	if (M.B < 1)
		throw OutOfRange("discrete_step_matrix: buffer too small");
	const BlockStructure &s = M.G.structure();
	Eigen::VectorXd n = state.N.row(a - 1);
	BlockMatrix lam = dot_lambda(s.D, M.total_levels(), n);
	Eigen::MatrixXd full =
	    lam.dense() * M.G.dense() - state.q[a - 1] * M.G.dense();
	BlockStructure so(s.D, M.total_levels() - 1);
	return BlockMatrix(so, full.topLeftCorner(so.total, so.total));
}

} // namespace mvopr
