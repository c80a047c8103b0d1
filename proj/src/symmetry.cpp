#include "mvopr/symmetry.hpp"

#include "mvopr/errors.hpp"
#include "mvopr/rng.hpp"
#include "mvopr/shift.hpp"

#include <algorithm>
#include <cmath>

namespace mvopr {

namespace {

double rel(const Eigen::MatrixXd &diff, const Eigen::MatrixXd &ref)
{
	return diff.norm() / std::max(1.0, ref.norm());
}

void require_orthogonal(const Eigen::MatrixXd &R)
{
	const int D = static_cast<int>(R.rows());
	if (R.cols() != D ||
	    (R.transpose() * R - Eigen::MatrixXd::Identity(D, D)).norm() >
	        1e-10)
		throw NotOrthogonal("matrix is not a linear isometry");
}

/** Deterministic sample points inside the support box. */
std::vector<Eigen::VectorXd> sample_points(const MeasureSpec &spec, int count)
{
	Xoshiro256 rng(7);
	std::vector<Eigen::VectorXd> pts(count);
	for (auto &p : pts) {
		p.resize(spec.D);
		for (int a = 0; a < spec.D; ++a)
			p[a] = rng.uniform(spec.lo[a], spec.hi[a]);
	}
	return pts;
}

} // namespace

Eigen::MatrixXd symmetric_power_matrix(const Eigen::MatrixXd &R, int k)
{
	require_orthogonal(R);
	const int D = static_cast<int>(R.rows());
	if (k == 0)
		return Eigen::MatrixXd::Identity(1, 1);

	std::vector<LevelBasis> bases(k + 1);
	for (int d = 0; d <= k; ++d)
		bases[d] = enumerate_level(D, d);

	const int n = bases[k].size();
	Eigen::MatrixXd M(n, n);
	for (int i = 0; i < n; ++i) {
		const MultiIndex &alpha = bases[k].indices[i];
		// expand prod_a (R e_a)^{(.)alpha_a} one linear factor at a
		// time; e^q (.) e^{q'} = e^{q+q'}
		Eigen::VectorXd coef = Eigen::VectorXd::Ones(1);
		int deg = 0;
		for (int a = 0; a < D; ++a) {
			for (int rep = 0; rep < alpha[a]; ++rep) {
				Eigen::VectorXd next = Eigen::VectorXd::Zero(
				    bases[deg + 1].size());
				for (int p = 0; p < bases[deg].size(); ++p) {
					if (coef[p] == 0.0)
						continue;
					MultiIndex q = bases[deg].indices[p];
					for (int j = 0; j < D; ++j) {
						q[j] += 1;
						next[position_in_level(
						    bases[deg + 1], q)] +=
						    coef[p] * R(j, a);
						q[j] -= 1;
					}
				}
				coef = next;
				++deg;
			}
		}
		M.col(i) = coef;
	}
	return M;
}

IsometryAction make_isometry_action(const Eigen::MatrixXd &R, int L)
{
	require_orthogonal(R);
	const int D = static_cast<int>(R.rows());
	IsometryAction act;
	act.R = R;
	act.power.reserve(L);
	act.eta.reserve(L);
	for (int k = 0; k < L; ++k) {
		Eigen::MatrixXd P = symmetric_power_matrix(R, k);
		Eigen::VectorXd m = multinomial_diagonal(D, k);
		act.power.push_back(P);
		act.eta.push_back(m.cwiseInverse().asDiagonal() * P *
		                  m.asDiagonal());
	}
	return act;
}

double chi_equivariance_residual(const IsometryAction &action,
                                 const Eigen::VectorXd &x)
{
	const int D = static_cast<int>(x.size());
	Eigen::VectorXd Rx = action.R * x;
	double res = 0.0;
	for (int k = 0; k < action.levels(); ++k) {
		LevelBasis basis = enumerate_level(D, k);
		res = std::max(res, (eval_chi_level(basis, Rx) -
		                     action.eta[k] * eval_chi_level(basis, x))
		                        .norm());
	}
	return res;
}

double shift_conjugation_residual(const IsometryAction &action,
                                  const Eigen::VectorXd &n)
{
	Eigen::VectorXd Rn = action.R * n;
	double res = 0.0;
	for (int k = 0; k + 1 < action.levels(); ++k) {
		Eigen::MatrixXd lhs = dot_lambda_block(Rn, k);
		Eigen::MatrixXd rhs = action.eta[k] * dot_lambda_block(n, k) *
		                      action.eta_inverse(k + 1);
		res = std::max(res, rel(lhs - rhs, rhs));
	}
	return res;
}

double right_inverse_residual(const IsometryAction &action, int a)
{
	const int D = static_cast<int>(action.R.rows());
	Eigen::VectorXd n = action.R.col(a - 1);
	double res = 0.0;
	for (int k = 1; k < action.levels(); ++k) {
		Eigen::MatrixXd B = dot_lambda_block(n, k - 1) *
		                    action.eta[k] *
		                    shift_block(D, a, k - 1).transpose() *
		                    action.eta_inverse(k - 1);
		const int sz = static_cast<int>(B.rows());
		res = std::max(
		    res,
		    (B - Eigen::MatrixXd::Identity(sz, sz)).norm());
	}
	return res;
}

double InvarianceResiduals::max() const
{
	return std::max({moment, S, H, beta, P, jacobi, kernel});
}

InvarianceResiduals
measure_invariance_residuals(const PolynomialSystem &sys,
                             const IsometryAction &action)
{
	const BlockStructure &s = sys.structure();
	const int LT = s.L;
	if (action.levels() < LT)
		throw OutOfRange(
		    "measure_invariance_residuals: action has too few levels");

	Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(s.total, s.total);
	Eigen::MatrixXd eta_inv = eta;
	for (int k = 0; k < LT; ++k) {
		eta.block(s.offsets[k], s.offsets[k], s.sizes[k],
		          s.sizes[k]) = action.eta[k];
		eta_inv.block(s.offsets[k], s.offsets[k], s.sizes[k],
		              s.sizes[k]) = action.eta_inverse(k);
	}

	InvarianceResiduals r{};
	const Eigen::MatrixXd &G = sys.M.G.dense();
	r.moment = rel(eta * G * eta.transpose() - G, G);
	const Eigen::MatrixXd &S = sys.F.S.dense();
	r.S = rel(eta * S * eta_inv - S, S);

	r.H = 0.0;
	r.beta = 0.0;
	for (int k = 0; k < LT; ++k) {
		r.H = std::max(r.H, rel(action.eta[k] * sys.H(k) *
		                                action.eta[k].transpose() -
		                            sys.H(k),
		                        sys.H(k)));
		if (k >= 1)
			r.beta = std::max(
			    r.beta, rel(action.eta[k] * sys.beta(k) -
			                    sys.beta(k) * action.eta[k - 1],
			                sys.beta(k)));
	}

	std::vector<Eigen::VectorXd> pts = sample_points(sys.spec, 4);
	r.P = 0.0;
	for (const auto &x : pts) {
		Eigen::VectorXd Rx = action.R * x;
		for (int k = 0; k < LT; ++k)
			r.P = std::max(
			    r.P, (eval_P(sys, k, Rx) -
			          action.eta[k] * eval_P(sys, k, x))
			             .norm());
	}

	Eigen::VectorXd n(sys.spec.D);
	for (int a = 0; a < sys.spec.D; ++a)
		n[a] = 1.0 / (a + 1);
	Eigen::MatrixXd J = jacobi_matrix(sys, n).dense();
	Eigen::MatrixXd JR = jacobi_matrix(sys, action.R * n).dense();
	const int rows = s.offsets[LT - 1];
	r.jacobi = rel((JR - eta * J * eta_inv).topRows(rows),
	               JR.topRows(rows));

	r.kernel = 0.0;
	for (size_t i = 0; i + 1 < pts.size(); ++i) {
		const Eigen::VectorXd &x = pts[i], &y = pts[i + 1];
		Eigen::VectorXd Rx = action.R * x, Ry = action.R * y;
		for (int l = 1; l <= sys.L; ++l) {
			double K = cd_kernel(sys, l, x, y);
			double KR = cd_kernel(sys, l, Rx, Ry);
			r.kernel = std::max(r.kernel, std::abs(KR - K) /
			                                  std::max(1.0,
			                                           std::abs(K)));
		}
	}
	return r;
}

TimeInvariance invariant_time_check(const IsometryAction &action,
                                    const std::vector<Eigen::VectorXd> &t)
{
	if (static_cast<int>(t.size()) + 1 > action.levels())
		throw OutOfRange(
		    "invariant_time_check: action has too few levels");
	double defect = 0.0;
	for (size_t j = 0; j < t.size(); ++j)
		defect = std::max(
		    defect,
		    (action.eta[j + 1].transpose() * t[j] - t[j]).norm());
	return {defect < 1e-10, defect};
}

} // namespace mvopr
