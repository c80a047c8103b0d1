#include "mvopr/darboux.hpp"

#include "mvopr/errors.hpp"
#include "mvopr/shift.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace mvopr {

namespace {

constexpr double kRcondFloor = 1e-8;
constexpr int kRetryBudget = 50;

double rcond(const Eigen::MatrixXd &A)
{
	Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
	const auto &sv = svd.singularValues();
	// floor the denominator so a uniformly tiny sample matrix (which a
	// pure singular-value ratio would rate as perfectly conditioned)
	// still counts as degenerate
	return sv(sv.size() - 1) / std::max(1.0, sv(0));
}

double rel(const Eigen::MatrixXd &diff, const Eigen::MatrixXd &ref)
{
	return diff.norm() / std::max(1.0, ref.norm());
}

/** Orthonormal tangent basis of the hyperplane with normal n. */
Eigen::MatrixXd tangent_basis(const Eigen::VectorXd &n)
{
	const int D = static_cast<int>(n.size());
	Eigen::HouseholderQR<Eigen::MatrixXd> qr(n);
	Eigen::MatrixXd Q = qr.householderQ();
	return Q.rightCols(D - 1);
}

/** One draw of `count` nodes on the hyperplane. */
Eigen::MatrixXd draw_nodes(const DarbouxStep &step, int count,
                           Xoshiro256 &rng)
{
	const int D = static_cast<int>(step.n.size());
	Eigen::VectorXd offset = step.q / step.n.squaredNorm() * step.n;
	Eigen::MatrixXd nodes(count, D);
	if (D == 1) {
		nodes.setConstant(step.q / step.n[0]);
		return nodes;
	}
	Eigen::MatrixXd tb = tangent_basis(step.n);
	for (int j = 0; j < count; ++j) {
		Eigen::VectorXd p = offset;
		for (int t = 0; t < tb.cols(); ++t)
			p += rng.uniform(-1.5, 1.5) * tb.col(t);
		nodes.row(j) = p;
	}
	return nodes;
}

/** Sample matrices for levels k..k+nlevels-1 over all node sets, stacked
 *  as one block matrix (rows by level, columns by set). */
Eigen::MatrixXd stacked_samples(const PolynomialSystem &sys,
                                const std::vector<Eigen::MatrixXd> &node_sets,
                                int k, int nlevels)
{
	const int D = sys.spec.D;
	int rows = 0, cols = 0;
	for (int r = 0; r < nlevels; ++r)
		rows += static_cast<int>(level_size(D, k + r));
	for (const auto &ns : node_sets)
		cols += static_cast<int>(ns.rows());
	Eigen::MatrixXd M(rows, cols);
	int roff = 0;
	for (int r = 0; r < nlevels; ++r) {
		int sz = static_cast<int>(level_size(D, k + r));
		int coff = 0;
		for (const auto &ns : node_sets) {
			M.block(roff, coff, sz, ns.rows()) =
			    sample_matrix(sys, k + r, ns);
			coff += static_cast<int>(ns.rows());
		}
		roff += sz;
	}
	return M;
}

/** (prod_i n_i . Lambda)_([k],[k+m]). */
Eigen::MatrixXd lambda_prefix(const std::vector<DarbouxStep> &steps, int k)
{
	Eigen::MatrixXd P = dot_lambda_block(steps[0].n, k);
	for (size_t i = 1; i < steps.size(); ++i)
		P = P * dot_lambda_block(steps[i].n, k + static_cast<int>(i));
	return P;
}

/** Bordered quasi-determinant shared by the Christoffel formulas: the
 *  stacked sample matrix over levels k..k+m bordered by the per-level
 *  column blocks in `border`. */
Eigen::MatrixXd christoffel_theta(const PolynomialSystem &sys,
                                  const std::vector<Eigen::MatrixXd> &node_sets,
                                  int k,
                                  const std::vector<Eigen::MatrixXd> &border)
{
	const int D = sys.spec.D;
	const int m = static_cast<int>(node_sets.size());
	Eigen::MatrixXd lead = stacked_samples(sys, node_sets, k, m + 1);
	const int bw = static_cast<int>(border[0].cols());
	Eigen::MatrixXd M(lead.rows(), lead.cols() + bw);
	M.leftCols(lead.cols()) = lead;
	int roff = 0;
	for (int r = 0; r <= m; ++r) {
		int sz = static_cast<int>(level_size(D, k + r));
		M.block(roff, lead.cols(), sz, bw) = border[r];
		roff += sz;
	}
	int last = static_cast<int>(level_size(D, k + m));
	return theta_star(M, last, bw);
}

std::vector<Eigen::MatrixXd> zero_border(const PolynomialSystem &sys, int k,
                                         int m, int width)
{
	std::vector<Eigen::MatrixXd> b(m + 1);
	for (int r = 0; r <= m; ++r)
		b[r] = Eigen::MatrixXd::Zero(
		    static_cast<int>(level_size(sys.spec.D, k + r)), width);
	return b;
}

} // namespace

FlowState with_darboux_steps(const FlowState &base,
                             const std::vector<DarbouxStep> &steps)
{
	FlowState s = base;
	const int R = static_cast<int>(s.m.size());
	const int extra = static_cast<int>(steps.size());
	s.N.conservativeResize(R + extra, Eigen::NoChange);
	s.q.conservativeResize(R + extra);
	s.m.conservativeResize(R + extra);
	for (int i = 0; i < extra; ++i) {
		s.N.row(R + i) = steps[i].n;
		s.q[R + i] = steps[i].q;
		s.m[R + i] = 1;
	}
	return s;
}

PolynomialSystem transformed_system(const PolynomialSystem &sys,
                                    const std::vector<DarbouxStep> &steps)
{
	return build_system(sys.spec, with_darboux_steps(sys.state, steps),
	                    sys.L, sys.B, sys.rule.per_axis);
}

Eigen::MatrixXd sample_matrix(const PolynomialSystem &sys, int l,
                              const Eigen::MatrixXd &nodes)
{
	const int sz = static_cast<int>(level_size(sys.spec.D, l));
	Eigen::MatrixXd S(sz, nodes.rows());
	for (int j = 0; j < nodes.rows(); ++j)
		S.col(j) = eval_P(sys, l, nodes.row(j));
	return S;
}

Eigen::MatrixXd poised_nodes(const PolynomialSystem &sys,
                             const DarbouxStep &step, int k, Xoshiro256 &rng)
{
	const int count = static_cast<int>(level_size(sys.spec.D, k));
	for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
		Eigen::MatrixXd nodes = draw_nodes(step, count, rng);
		if (rcond(sample_matrix(sys, k, nodes)) > kRcondFloor)
			return nodes;
	}
	throw PoisednessFailure("poised_nodes: retry budget exhausted");
}

std::vector<Eigen::MatrixXd>
poised_node_sets(const PolynomialSystem &sys,
                 const std::vector<DarbouxStep> &steps, int k,
                 Xoshiro256 &rng)
{
	const int m = static_cast<int>(steps.size());
	for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
		std::vector<Eigen::MatrixXd> sets(m);
		for (int i = 0; i < m; ++i)
			sets[i] = draw_nodes(
			    steps[i],
			    static_cast<int>(level_size(sys.spec.D, k + i)),
			    rng);
		if (rcond(stacked_samples(sys, sets, k, m)) > kRcondFloor)
			return sets;
	}
	throw PoisednessFailure("poised_node_sets: retry budget exhausted");
}

Eigen::VectorXd christoffel_P(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k, const Eigen::VectorXd &x)
{
	const int m = static_cast<int>(steps.size());
	double Q = 1.0;
	for (const auto &st : steps)
		Q *= st.n.dot(x) - st.q;
	if (std::abs(Q) < 1e-10)
		throw DegeneratePoint(
		    "christoffel_P: point on a transformation hyperplane");
	std::vector<Eigen::MatrixXd> border(m + 1);
	for (int r = 0; r <= m; ++r)
		border[r] = eval_P(sys, k + r, x);
	return lambda_prefix(steps, k) *
	       christoffel_theta(sys, node_sets, k, border) / Q;
}

Eigen::VectorXd christoffel_C(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k, const Eigen::VectorXd &z)
{
	const int m = static_cast<int>(steps.size());
	std::vector<Eigen::MatrixXd> border(m + 1);
	for (int r = 0; r <= m; ++r)
		border[r] = eval_C(sys, k + r, z);
	return lambda_prefix(steps, k) *
	       christoffel_theta(sys, node_sets, k, border);
}

Eigen::MatrixXd christoffel_H(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k)
{
	const int m = static_cast<int>(steps.size());
	std::vector<Eigen::MatrixXd> border =
	    zero_border(sys, k, m, static_cast<int>(sys.H(k).cols()));
	border[0] = sys.H(k);
	return lambda_prefix(steps, k) *
	       christoffel_theta(sys, node_sets, k, border);
}

Eigen::MatrixXd
resolvent_block_samples(const PolynomialSystem &sys,
                        const std::vector<DarbouxStep> &steps,
                        const std::vector<Eigen::MatrixXd> &node_sets, int k,
                        int j)
{
	const int m = static_cast<int>(steps.size());
	if (j < 0 || j > m)
		throw OutOfRange("resolvent_block_samples: band out of range");
	if (j == m)
		return lambda_prefix(steps, k);
	const int width = static_cast<int>(level_size(sys.spec.D, k + j));
	std::vector<Eigen::MatrixXd> border = zero_border(sys, k, m, width);
	border[j] = Eigen::MatrixXd::Identity(width, width);
	return lambda_prefix(steps, k) *
	       christoffel_theta(sys, node_sets, k, border);
}

Connection connection_matrices(const PolynomialSystem &sys,
                               const PolynomialSystem &stepped, int a)
{
	const BlockStructure &s = sys.structure();
	const Eigen::VectorXd n = sys.state.N.row(a - 1);
	const double q = sys.state.q[a - 1];
	Connection c;
	c.rho.resize(s.L);
	c.alpha.resize(s.L);
	c.rho_alt.resize(s.L);
	c.alpha_alt.resize(s.L);
	c.M = BlockMatrix(s);
	c.omega = BlockMatrix(s);
	for (int k = 0; k < s.L; ++k) {
		c.alpha[k] = solve_guarded(sys.H(k).transpose(),
		                           stepped.H(k).transpose())
		                 .transpose(); // (T_a H_k) H_k^{-1}
		c.M.block(k, k).setIdentity();
		c.omega.block(k, k) = c.alpha[k];
		if (k + 1 < s.L)
			c.omega.block(k, k + 1) = dot_lambda_block(n, k);
		if (k >= 1) {
			Eigen::MatrixXd B = dot_lambda_block(n, k - 1);
			c.rho[k] =
			    sys.H(k) *
			    solve_guarded(stepped.H(k - 1), B).transpose();
			c.M.block(k, k - 1) = c.rho[k];
			c.rho_alt[k] = sys.beta(k) - stepped.beta(k);
		}
		// alpha through the beta blocks (needs beta_(k+1))
		if (k == 0) {
			c.alpha_alt[0] =
			    -dot_lambda_block(n, 0) * sys.beta(1) -
			    q * Eigen::MatrixXd::Identity(1, 1);
		} else if (k + 1 < s.L) {
			c.alpha_alt[k] =
			    stepped.beta(k) * dot_lambda_block(n, k - 1) -
			    dot_lambda_block(n, k) * sys.beta(k + 1) -
			    q * Eigen::MatrixXd::Identity(s.sizes[k],
			                                   s.sizes[k]);
		}
	}
	return c;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
resolvent_quasideterminant(const PolynomialSystem &sys,
                           const Eigen::VectorXd &n, double q, int k)
{
	const BlockStructure &s = sys.structure();
	if (k < 0 || k + 2 > s.L)
		throw OutOfRange("resolvent_quasideterminant: level too high");
	BlockMatrix J = jacobi_matrix(sys, n);
	BlockMatrix Jk1 = J.truncation(k + 1);
	Eigen::MatrixXd shifted =
	    Jk1.dense() -
	    q * Eigen::MatrixXd::Identity(Jk1.dense().rows(),
	                                  Jk1.dense().cols());
	Eigen::MatrixXd alpha = theta_star(shifted, s.sizes[k], s.sizes[k]);
	Eigen::MatrixXd rho;
	if (k >= 1) {
		BlockMatrix Jk = J.truncation(k);
		Eigen::MatrixXd sh =
		    Jk.dense() -
		    q * Eigen::MatrixXd::Identity(Jk.dense().rows(),
		                                  Jk.dense().cols());
		Eigen::MatrixXd piv =
		    theta_star(sh, s.sizes[k - 1], s.sizes[k - 1]);
		rho = solve_guarded(piv.transpose(),
		                    J.block(k, k - 1).transpose())
		          .transpose();
	}
	return {rho, alpha};
}

std::pair<double, double> lu_ul_residuals(const PolynomialSystem &sys,
                                          const PolynomialSystem &stepped,
                                          int a)
{
	const BlockStructure &s = sys.structure();
	const Eigen::VectorXd n = sys.state.N.row(a - 1);
	const double q = sys.state.q[a - 1];
	Connection c = connection_matrices(sys, stepped, a);
	Eigen::MatrixXd I = Eigen::MatrixXd::Identity(s.total, s.total);
	Eigen::MatrixXd J = jacobi_matrix(sys, n).dense() - q * I;
	Eigen::MatrixXd TJ = jacobi_matrix(stepped, n).dense() - q * I;
	const int rows = s.offsets[s.L - 1];
	Eigen::MatrixXd lu = J - c.M.dense() * c.omega.dense();
	Eigen::MatrixXd ul = TJ - c.omega.dense() * c.M.dense();
	return {rel(lu.topRows(rows), J.topRows(rows)),
	        rel(ul.topRows(rows), TJ.topRows(rows))};
}

LaxZsResiduals discrete_laxzs_residuals(const PolynomialSystem &sys,
                                        const PolynomialSystem &Ta,
                                        const PolynomialSystem &Tb,
                                        const PolynomialSystem &Tab, int a,
                                        int b)
{
	const BlockStructure &s = sys.structure();
	const Eigen::VectorXd na = sys.state.N.row(a - 1);
	Connection wa = connection_matrices(sys, Ta, a);
	Connection wb = connection_matrices(sys, Tb, b);
	Connection Tawb = connection_matrices(Ta, Tab, b);
	Connection Tbwa = connection_matrices(Tb, Tab, a);
	Eigen::MatrixXd Ja = jacobi_matrix(sys, na).dense();
	Eigen::MatrixXd TbJa = jacobi_matrix(Tb, na).dense();

	const int deep = s.offsets[s.L - 2];
	const int shallow = s.offsets[s.L - 1];
	LaxZsResiduals r;
	{
		Eigen::MatrixXd lhs = TbJa * wb.omega.dense();
		Eigen::MatrixXd rhs = wb.omega.dense() * Ja;
		r.lax_omega = rel((lhs - rhs).topRows(deep), rhs.topRows(deep));
	}
	{
		Eigen::MatrixXd lhs = wb.M.dense() * TbJa;
		Eigen::MatrixXd rhs = Ja * wb.M.dense();
		r.lax_M =
		    rel((lhs - rhs).topRows(shallow), rhs.topRows(shallow));
	}
	{
		Eigen::MatrixXd lhs = Tawb.omega.dense() * wa.omega.dense();
		Eigen::MatrixXd rhs = Tbwa.omega.dense() * wb.omega.dense();
		r.zs_omega = rel((lhs - rhs).topRows(deep), rhs.topRows(deep));
	}
	{
		Eigen::MatrixXd lhs = wa.M.dense() * Tawb.M.dense();
		Eigen::MatrixXd rhs = wb.M.dense() * Tbwa.M.dense();
		r.zs_M = rel(lhs - rhs, rhs);
	}
	return r;
}

std::pair<double, double> discrete_toda_residuals(const PolynomialSystem &sys,
                                                  const PolynomialSystem &Ta,
                                                  const PolynomialSystem &Tb,
                                                  const PolynomialSystem &Tab,
                                                  int a, int b, int k)
{
	const BlockStructure &s = sys.structure();
	if (k < 1 || k + 2 > s.L)
		throw OutOfRange("discrete_toda_residuals: level out of range");
	const Eigen::VectorXd na = sys.state.N.row(a - 1);
	const Eigen::VectorXd nb = sys.state.N.row(b - 1);
	const double qb = sys.state.q[b - 1];

	// H-equation
	Eigen::MatrixXd at_b =
	    solve_guarded(Tb.H(k).transpose(),
	                  (Tab.H(k) - Tb.H(k)).transpose())
	        .transpose();
	Eigen::MatrixXd at_0 =
	    solve_guarded(sys.H(k).transpose(), (Ta.H(k) - sys.H(k)).transpose())
	        .transpose();
	Eigen::MatrixXd lhsH = at_b - at_0;
	Eigen::MatrixXd Ba_k = dot_lambda_block(na, k);
	Eigen::MatrixXd Ba_km = dot_lambda_block(na, k - 1);
	Eigen::MatrixXd Bb_k = dot_lambda_block(nb, k);
	Eigen::MatrixXd Bb_km = dot_lambda_block(nb, k - 1);
	Eigen::MatrixXd rhsH =
	    Ba_k * solve_guarded(Tb.H(k).transpose(),
	                         (sys.H(k + 1) * Bb_k.transpose()).transpose())
	               .transpose() -
	    Ta.H(k) * Bb_km.transpose() *
	        solve_guarded(Tab.H(k - 1), Ba_km);
	double resH = rel(lhsH - rhsH, rhsH);

	// beta-equation: the right factor is the translated alpha block one
	// level down
	const int szk = s.sizes[k], szkm = s.sizes[k - 1];
	Eigen::MatrixXd alpha_b =
	    Tb.beta(k) * Bb_km - Bb_k * sys.beta(k + 1) -
	    qb * Eigen::MatrixXd::Identity(szk, szk);
	Eigen::MatrixXd Ta_alpha_b =
	    -Bb_km * Ta.beta(k) -
	    qb * Eigen::MatrixXd::Identity(szkm, szkm);
	if (k >= 2)
		Ta_alpha_b += Tab.beta(k - 1) * dot_lambda_block(nb, k - 2);
	Eigen::MatrixXd lhsB = alpha_b * (Ta.beta(k) - sys.beta(k));
	Eigen::MatrixXd rhsB = (Tab.beta(k) - Tb.beta(k)) * Ta_alpha_b;
	double resB = rel(lhsB - rhsB, rhsB);
	return {resH, resB};
}

Eigen::VectorXd tau_quotient_P(const PolynomialSystem &sys,
                               const std::vector<PolynomialSystem> &stepped,
                               int k)
{
	const int D = sys.spec.D;
	if (static_cast<int>(stepped.size()) != D)
		throw OutOfRange("tau_quotient_P: need all D translates");
	Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
	for (int j = 0; j < k; ++j) {
		const int sj = static_cast<int>(level_size(D, j));
		const int sj1 = static_cast<int>(level_size(D, j + 1));
		Eigen::MatrixXd NL(D * sj, sj1);
		Eigen::MatrixXd TH(D * sj, sj);
		for (int a = 1; a <= D; ++a) {
			NL.middleRows((a - 1) * sj, sj) =
			    dot_lambda_block(sys.state.N.row(a - 1), j);
			TH.middleRows((a - 1) * sj, sj) = stepped[a - 1].H(j);
		}
		Eigen::MatrixXd term =
		    pseudo_inverse_full_column_rank(NL) * TH *
		    solve_guarded(sys.H(j),
		                  Eigen::MatrixXd::Identity(sj, sj));
		acc = term * acc;
	}
	return (k % 2 ? -1.0 : 1.0) * acc.col(0);
}

Eigen::VectorXd tau_quotient_C(const PolynomialSystem &sys,
                               const std::vector<PolynomialSystem> &inv,
                               int k)
{
	const int D = sys.spec.D;
	if (static_cast<int>(inv.size()) != D + 1)
		throw OutOfRange("tau_quotient_C: need D+1 inverse translates");
	// rho^(a)_[j] built from the suffix inverse translates
	auto rho = [&](int a, int j) {
		Eigen::MatrixXd lam = shift_block(D, a, j - 1);
		return Eigen::MatrixXd(
		    inv[a - 1].H(j) *
		    solve_guarded(inv[a].H(j - 1), lam).transpose());
	};
	const int sk = static_cast<int>(level_size(D, k));
	Eigen::VectorXd total = Eigen::VectorXd::Zero(sk);
	// weakly increasing sequences a_1 <= ... <= a_k
	std::vector<int> seq(k, 1);
	auto advance = [&]() {
		for (int i = k - 1; i >= 0; --i) {
			if (seq[i] < D) {
				int v = ++seq[i];
				for (int j = i + 1; j < k; ++j)
					seq[j] = v;
				return true;
			}
		}
		return false;
	};
	bool more = true;
	if (k == 0)
		more = false, total = inv[0].H(0).col(0);
	while (more) {
		Eigen::MatrixXd acc = inv[0].H(0);
		for (int i = 1; i <= k; ++i)
			acc = rho(seq[i - 1], i) * acc;
		total += acc.col(0);
		more = advance();
	}
	double sign = ((k + D) % 2) ? -1.0 : 1.0;
	return sign * total;
}

double cd_transform_residual(const PolynomialSystem &sys,
                             const PolynomialSystem &tsys,
                             const DarbouxStep &step, int l,
                             const Eigen::VectorXd &x,
                             const Eigen::VectorXd &y)
{
	if (l < 1 || l + 1 > sys.total_levels())
		throw OutOfRange("cd_transform_residual: order out of range");
	double lhs = cd_kernel(sys, l, x, y);
	double rhs = (step.n.dot(x) - step.q) *
	             (l >= 2 ? cd_kernel(tsys, l - 1, x, y) : 0.0);
	Eigen::VectorXd Px = eval_P(sys, l - 1, x);
	Eigen::VectorXd TPy = eval_P(tsys, l - 1, y);
	rhs += Px.dot(Eigen::VectorXd(solve_guarded(sys.H(l - 1), TPy)));
	return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double cd_transform_residual_2step(const PolynomialSystem &sys,
                                   const PolynomialSystem &tsys,
                                   const std::vector<DarbouxStep> &steps,
                                   int l, const Eigen::VectorXd &x,
                                   const Eigen::VectorXd &y)
{
	if (steps.size() != 2)
		throw OutOfRange("cd_transform_residual_2step: need two steps");
	if (l < 1 || l + 3 > sys.total_levels())
		throw OutOfRange("cd_transform_residual_2step: order range");
	const Eigen::VectorXd &n1 = steps[0].n, &n2 = steps[1].n;
	double Qx = (steps[0].n.dot(x) - steps[0].q) *
	            (steps[1].n.dot(x) - steps[1].q);
	double lhs = cd_kernel(sys, l + 2, x, y);
	double rhs = Qx * cd_kernel(tsys, l, x, y);

	Eigen::VectorXd TPl = eval_P(tsys, l, y);
	Eigen::VectorXd TPl1 = eval_P(tsys, l + 1, y);
	rhs += Eigen::VectorXd(solve_guarded(sys.H(l), TPl))
	           .dot(eval_P(sys, l, x));
	rhs += Eigen::VectorXd(solve_guarded(sys.H(l + 1), TPl1))
	           .dot(eval_P(sys, l + 1, x));

	// zeta block: H_l (TH_l)^{-1} omega_(l,l+1)
	Eigen::VectorXd nmix = steps[0].q * n2 + steps[1].q * n1;
	Eigen::MatrixXd prod_lm1 =
	    dot_lambda_block(n1, l - 1) * dot_lambda_block(n2, l);
	Eigen::MatrixXd prod_l =
	    dot_lambda_block(n1, l) * dot_lambda_block(n2, l + 1);
	Eigen::MatrixXd omega = tsys.beta(l) * prod_lm1 -
	                        prod_l * sys.beta(l + 2) -
	                        dot_lambda_block(nmix, l);
	Eigen::MatrixXd zeta =
	    sys.H(l) * solve_guarded(tsys.H(l), omega);
	rhs += Eigen::VectorXd(
	           solve_guarded(sys.H(l), Eigen::MatrixXd(zeta *
	                                                   eval_P(sys, l + 1, x))))
	           .dot(TPl);
	return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

} // namespace mvopr
