#include "mvopr/system.hpp"

#include "mvopr/errors.hpp"
#include "mvopr/shift.hpp"

#include <cmath>

namespace mvopr {

namespace {

Eigen::VectorXd chi_level(int D, int k, const Eigen::VectorXd &x)
{
	return eval_chi_level(enumerate_level(D, k), x);
}

Eigen::VectorXd solve_vec(const Eigen::MatrixXd &A, const Eigen::VectorXd &b)
{
	return Eigen::VectorXd(solve_guarded(A, b));
}

/** Denominator prod over kept axes of (z_a - y_a); `keep` is a 0/1 mask. */
double cauchy_denominator(const Eigen::VectorXd &z, const Eigen::VectorXd &y,
                          const std::vector<bool> &keep)
{
	double d = 1.0;
	for (int a = 0; a < z.size(); ++a)
		if (keep[a])
			d *= z[a] - y[a];
	return d;
}

/** Compensated vector accumulation of w_j * P_[k](y_j) / denom_j. */
Eigen::VectorXd cauchy_transform(const PolynomialSystem &sys, int k,
                                 const Eigen::VectorXd &z,
                                 const std::vector<bool> &keep)
{
	const int D = sys.spec.D;
	for (int a = 0; a < D; ++a) {
		if (!keep[a])
			continue;
		double margin = std::min(std::abs(z[a] - sys.spec.lo[a]),
		                         std::abs(z[a] - sys.spec.hi[a]));
		bool inside = z[a] > sys.spec.lo[a] && z[a] < sys.spec.hi[a];
		if (inside || margin < 1e-6)
			throw TooCloseToSupport(
			    "cauchy transform: point too close to the box");
	}
	const int sz = static_cast<int>(level_size(D, k));
	Eigen::VectorXd sum = Eigen::VectorXd::Zero(sz);
	Eigen::VectorXd comp = Eigen::VectorXd::Zero(sz);
	for (long j = 0; j < sys.rule.weights.size(); ++j) {
		Eigen::VectorXd y = sys.rule.nodes.row(j);
		double w = sys.rule.weights[j] * deformed_weight(y, sys.state);
		Eigen::VectorXd term =
		    (w / cauchy_denominator(z, y, keep)) * eval_P(sys, k, y);
		for (int i = 0; i < sz; ++i) {
			double t = term[i] - comp[i];
			double s = sum[i] + t;
			comp[i] = (s - sum[i]) - t;
			sum[i] = s;
		}
	}
	return sum;
}

/** n . C-hat_[k](z): reduced functions summed over the dropped axis. */
Eigen::VectorXd dot_reduced_C(const PolynomialSystem &sys,
                              const Eigen::VectorXd &n, int k,
                              const Eigen::VectorXd &z)
{
	const int sz = static_cast<int>(level_size(sys.spec.D, k));
	Eigen::VectorXd acc = Eigen::VectorXd::Zero(sz);
	for (int a = 1; a <= sys.spec.D; ++a) {
		if (n[a - 1] == 0.0)
			continue;
		acc += n[a - 1] * eval_C_reduced(sys, k, {a}, z);
	}
	return acc;
}

} // namespace

PolynomialSystem build_system(const MeasureSpec &spec, const FlowState &state,
                              int L, int B, int quad_order)
{
	PolynomialSystem sys;
	sys.spec = spec;
	sys.state = state;
	sys.L = L;
	sys.B = B;
	sys.rule = build_quadrature(spec, quad_order);
	sys.M = moment_matrix(spec, state, L, B, sys.rule);
	sys.F = block_ldl_factorize(sys.M.G);
	return sys;
}

PolynomialSystem stepped_system(const PolynomialSystem &sys, int a, int delta)
{
	return build_system(sys.spec, sys.state.stepped(a, delta), sys.L, sys.B,
	                    sys.rule.per_axis);
}

Eigen::VectorXd eval_P(const PolynomialSystem &sys, int k,
                       const Eigen::VectorXd &x)
{
	if (k < 0 || k >= sys.total_levels())
		throw OutOfRange("eval_P: level out of range");
	const int D = sys.spec.D;
	Eigen::VectorXd v =
	    Eigen::VectorXd::Zero(static_cast<int>(level_size(D, k)));
	for (int l = 0; l <= k; ++l)
		v += sys.F.S.block(k, l) * chi_level(D, l, x);
	return v;
}

Eigen::VectorXd eval_P_stack(const PolynomialSystem &sys, int l,
                             const Eigen::VectorXd &x)
{
	const BlockStructure &s = sys.structure();
	if (l < 1 || l > s.L)
		throw OutOfRange("eval_P_stack: level out of range");
	Eigen::VectorXd v(s.offsets[l - 1] + s.sizes[l - 1]);
	for (int k = 0; k < l; ++k)
		v.segment(s.offsets[k], s.sizes[k]) = eval_P(sys, k, x);
	return v;
}

Eigen::VectorXd eval_P_quasideterminant(const PolynomialSystem &sys, int l,
                                        const Eigen::VectorXd &x)
{
	const BlockStructure &s = sys.structure();
	if (l < 0 || l >= s.L)
		throw OutOfRange("eval_P_quasideterminant: level out of range");
	const int lead = s.offsets[l];
	const int D = sys.spec.D;
	Eigen::MatrixXd M(lead + s.sizes[l], lead + 1);
	M.topLeftCorner(lead, lead) = sys.M.G.dense().topLeftCorner(lead, lead);
	M.bottomLeftCorner(s.sizes[l], lead) =
	    sys.M.G.dense().block(s.offsets[l], 0, s.sizes[l], lead);
	for (int k = 0; k < l; ++k)
		M.block(s.offsets[k], lead, s.sizes[k], 1) = chi_level(D, k, x);
	M.bottomRightCorner(s.sizes[l], 1) = chi_level(D, l, x);
	return theta_star(M, s.sizes[l], 1);
}

BlockMatrix jacobi_matrix(const PolynomialSystem &sys, const Eigen::VectorXd &n)
{
	const BlockStructure &s = sys.structure();
	BlockMatrix nl = dot_lambda(s.D, s.L, n);
	Eigen::MatrixXd J =
	    sys.F.S.dense() * nl.dense() * sys.F.Sinv.dense();
	return BlockMatrix(s, std::move(J));
}

BlockMatrix jacobi_matrix_explicit(const PolynomialSystem &sys,
                                   const Eigen::VectorXd &n)
{
	const BlockStructure &s = sys.structure();
	BlockMatrix J(s);
	if (s.L < 2)
		throw OutOfRange("jacobi_matrix_explicit: need two levels");
	Eigen::MatrixXd B0 = dot_lambda_block(n, 0);
	J.block(0, 0) = -B0 * sys.beta(1);
	J.block(0, 1) = B0;
	for (int k = 1; k + 1 < s.L; ++k) {
		Eigen::MatrixXd Bk = dot_lambda_block(n, k);
		Eigen::MatrixXd Bkm = dot_lambda_block(n, k - 1);
		J.block(k, k - 1) =
		    sys.H(k) *
		    solve_guarded(sys.H(k - 1), Bkm).transpose();
		J.block(k, k) = sys.beta(k) * Bkm - Bk * sys.beta(k + 1);
		J.block(k, k + 1) = Bk;
	}
	return J;
}

double three_term_residual(const PolynomialSystem &sys,
                           const Eigen::VectorXd &n, int k,
                           const Eigen::VectorXd &x)
{
	const int LT = sys.total_levels();
	if (k < 0 || k + 1 >= LT)
		throw OutOfRange("three_term_residual: level out of range");
	const double nx = n.dot(x);
	if (k == 0) {
		Eigen::MatrixXd B0 = dot_lambda_block(n, 0);
		Eigen::VectorXd lhs =
		    nx * eval_P(sys, 0, x) + B0 * sys.beta(1) * eval_P(sys, 0, x);
		Eigen::VectorXd rhs = B0 * eval_P(sys, 1, x);
		return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
	}
	Eigen::MatrixXd Bk = dot_lambda_block(n, k);
	Eigen::MatrixXd Bkm = dot_lambda_block(n, k - 1);
	Eigen::VectorXd lhs = nx * eval_P(sys, k, x);
	Eigen::VectorXd rhs =
	    sys.H(k) * (Bkm.transpose() *
	                solve_guarded(sys.H(k - 1), eval_P(sys, k - 1, x)));
	rhs += (sys.beta(k) * Bkm - Bk * sys.beta(k + 1)) * eval_P(sys, k, x);
	rhs += Bk * eval_P(sys, k + 1, x);
	return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

double cd_kernel(const PolynomialSystem &sys, int l, const Eigen::VectorXd &x,
                 const Eigen::VectorXd &y)
{
	if (l < 1 || l > sys.total_levels())
		throw OutOfRange("cd_kernel: order out of range");
	double v = 0.0;
	for (int k = 0; k < l; ++k)
		v += eval_P(sys, k, x)
		         .dot(solve_vec(sys.H(k), eval_P(sys, k, y)));
	return v;
}

double cd_formula_residual(const PolynomialSystem &sys, int l,
                           const Eigen::VectorXd &n, const Eigen::VectorXd &x,
                           const Eigen::VectorXd &y)
{
	if (l < 1 || l + 1 > sys.total_levels())
		throw OutOfRange("cd_formula_residual: order out of range");
	const double gap = n.dot(x - y);
	if (std::abs(gap) < 1e-10)
		throw DegeneratePoint("cd_formula_residual: n.(x-y) vanishes");
	Eigen::MatrixXd B = dot_lambda_block(n, l - 1);
	Eigen::VectorXd Px = eval_P(sys, l - 1, x);
	Eigen::VectorXd Py = eval_P(sys, l - 1, y);
	double num =
	    (B * eval_P(sys, l, x)).dot(solve_vec(sys.H(l - 1), Py)) -
	    Px.dot(solve_vec(sys.H(l - 1), B * eval_P(sys, l, y)));
	double lhs = cd_kernel(sys, l, x, y);
	double rhs = num / gap;
	return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

Eigen::VectorXd eval_C(const PolynomialSystem &sys, int k,
                       const Eigen::VectorXd &z)
{
	return cauchy_transform(sys, k, z,
	                        std::vector<bool>(sys.spec.D, true));
}

Eigen::VectorXd eval_C_reduced(const PolynomialSystem &sys, int k,
                               const std::vector<int> &dropped,
                               const Eigen::VectorXd &z)
{
	std::vector<bool> keep(sys.spec.D, true);
	for (int a : dropped) {
		if (a < 1 || a > sys.spec.D)
			throw OutOfRange("eval_C_reduced: bad axis");
		keep[a - 1] = false;
	}
	return cauchy_transform(sys, k, z, keep);
}

double secondkind_three_term_residual(const PolynomialSystem &sys,
                                      const Eigen::VectorXd &n, int k,
                                      const Eigen::VectorXd &z)
{
	const int LT = sys.total_levels();
	if (k < 0 || k + 1 >= LT)
		throw OutOfRange("secondkind_three_term_residual: bad level");
	const double nz = n.dot(z);
	if (k == 0) {
		Eigen::MatrixXd B0 = dot_lambda_block(n, 0);
		Eigen::VectorXd C0 = eval_C(sys, 0, z);
		Eigen::VectorXd lhs = nz * C0 + B0 * sys.beta(1) * C0;
		Eigen::VectorXd rhs =
		    B0 * eval_C(sys, 1, z) + dot_reduced_C(sys, n, 0, z);
		return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
	}
	Eigen::MatrixXd Bk = dot_lambda_block(n, k);
	Eigen::MatrixXd Bkm = dot_lambda_block(n, k - 1);
	Eigen::VectorXd lhs = nz * eval_C(sys, k, z);
	Eigen::VectorXd rhs =
	    sys.H(k) * (Bkm.transpose() *
	                solve_guarded(sys.H(k - 1), eval_C(sys, k - 1, z)));
	rhs += (sys.beta(k) * Bkm - Bk * sys.beta(k + 1)) * eval_C(sys, k, z);
	rhs += Bk * eval_C(sys, k + 1, z);
	rhs += dot_reduced_C(sys, n, k, z);
	return (lhs - rhs).norm() / std::max(1.0, lhs.norm());
}

double q_kernel(const PolynomialSystem &sys, int l, const Eigen::VectorXd &x,
                const Eigen::VectorXd &y)
{
	if (l < 1 || l > sys.total_levels())
		throw OutOfRange("q_kernel: order out of range");
	double v = 0.0;
	for (int k = 0; k < l; ++k)
		v += eval_C(sys, k, x)
		         .dot(solve_vec(sys.H(k), eval_C(sys, k, y)));
	return v;
}

double q_kernel_residual(const PolynomialSystem &sys, int l,
                         const Eigen::VectorXd &n, const Eigen::VectorXd &x,
                         const Eigen::VectorXd &y)
{
	if (l < 1 || l + 1 > sys.total_levels())
		throw OutOfRange("q_kernel_residual: order out of range");
	const double gap = n.dot(x - y);
	if (std::abs(gap) < 1e-10)
		throw DegeneratePoint("q_kernel_residual: n.(x-y) vanishes");
	Eigen::MatrixXd B = dot_lambda_block(n, l - 1);
	double num =
	    (B * eval_C(sys, l, x))
	        .dot(solve_vec(sys.H(l - 1), eval_C(sys, l - 1, y))) -
	    eval_C(sys, l - 1, x)
	        .dot(solve_vec(sys.H(l - 1), B * eval_C(sys, l, y)));
	// correction from the reduced functions, summed over orders below l
	for (int k = 0; k < l; ++k)
		num += dot_reduced_C(sys, n, k, x)
		           .dot(solve_vec(sys.H(k), eval_C(sys, k, y))) -
		       eval_C(sys, k, x)
		           .dot(solve_vec(sys.H(k),
		                          dot_reduced_C(sys, n, k, y)));
	double lhs = q_kernel(sys, l, x, y);
	double rhs = num / gap;
	return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

Eigen::MatrixXd gram_block(const PolynomialSystem &sys, int k, int l)
{
	const int D = sys.spec.D;
	Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(
	    static_cast<int>(level_size(D, k)),
	    static_cast<int>(level_size(D, l)));
	Eigen::MatrixXd comp = sum;
	for (long j = 0; j < sys.rule.weights.size(); ++j) {
		Eigen::VectorXd y = sys.rule.nodes.row(j);
		double w = sys.rule.weights[j] * deformed_weight(y, sys.state);
		Eigen::MatrixXd term =
		    w * eval_P(sys, k, y) * eval_P(sys, l, y).transpose();
		Eigen::MatrixXd t = term - comp;
		Eigen::MatrixXd s = sum + t;
		comp = (s - sum) - t;
		sum = s;
	}
	return sum;
}

} // namespace mvopr
