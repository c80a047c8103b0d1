#include "mvopr/toda.hpp"

#include "mvopr/errors.hpp"
#include "mvopr/shift.hpp"

#include <cmath>
#include <functional>

namespace mvopr {

namespace {

using Extract = std::function<Eigen::MatrixXd(const PolynomialSystem &)>;

double rel(const Eigen::MatrixXd &diff, const Eigen::MatrixXd &ref)
{
	return diff.norm() / std::max(1.0, ref.norm());
}

/** M A^{-1} for symmetric-solvable A. */
Eigen::MatrixXd inv_times(const Eigen::MatrixXd &M, const Eigen::MatrixXd &A)
{
	return solve_guarded(A.transpose(), M.transpose()).transpose();
}

/** Nested central differences with respect to vars[i..]; shifts collected
 *  in `acc` so the system is rebuilt only at stencil leaves. */
Eigen::MatrixXd fd_nested(const PolynomialSystem &base,
                          std::vector<std::pair<TimeIndex, double>> acc,
                          const std::vector<TimeIndex> &vars, size_t i,
                          const Extract &f, double h)
{
	if (i == vars.size())
		return f(time_shifted_system(base, acc));
	acc.push_back({vars[i], +h});
	Eigen::MatrixXd p = fd_nested(base, acc, vars, i + 1, f, h);
	acc.back().second = -h;
	Eigen::MatrixXd m = fd_nested(base, acc, vars, i + 1, f, h);
	return (p - m) / (2.0 * h);
}

Eigen::MatrixXd fd1(const PolynomialSystem &sys, TimeIndex t,
                    const Extract &f, const FdConfig &cfg)
{
	auto diff = [&](double h) {
		return fd_nested(sys, {}, {t}, 0, f, h);
	};
	if (!cfg.richardson)
		return diff(cfg.h1);
	return (4.0 * diff(cfg.h1 / 2) - diff(cfg.h1)) / 3.0;
}

Eigen::MatrixXd fd2(const PolynomialSystem &sys, TimeIndex t1, TimeIndex t2,
                    const Extract &f, const FdConfig &cfg)
{
	return fd_nested(sys, {}, {t1, t2}, 0, f, cfg.h2);
}

Eigen::MatrixXd fd3(const PolynomialSystem &sys, TimeIndex t1, TimeIndex t2,
                    TimeIndex t3, const Extract &f, const FdConfig &cfg)
{
	return fd_nested(sys, {}, {t1, t2, t3}, 0, f, cfg.h3);
}

Extract factor_extract(Factor f, int k)
{
	switch (f) {
	case Factor::H:
		return [k](const PolynomialSystem &s) { return s.H(k); };
	case Factor::Beta:
		return [k](const PolynomialSystem &s) { return s.beta(k); };
	case Factor::Beta2:
		return [k](const PolynomialSystem &s) {
			return Eigen::MatrixXd(s.F.S.block(k, k - 2));
		};
	}
	throw OutOfRange("factor_extract: unknown factor");
}

/** Cache of the stencil systems of one first derivative so several
 *  quantities can be differentiated from the same builds. */
struct Fd1Cache
{
	PolynomialSystem p1, m1, p2, m2;
	double h;
	bool rich;

	Eigen::MatrixXd d(const Extract &f) const
	{
		Eigen::MatrixXd full = (f(p1) - f(m1)) / (2.0 * h);
		if (!rich)
			return full;
		Eigen::MatrixXd half = (f(p2) - f(m2)) / h;
		return (4.0 * half - full) / 3.0;
	}
};

Fd1Cache make_fd1(const PolynomialSystem &sys, TimeIndex t,
                  const FdConfig &cfg)
{
	Fd1Cache c;
	c.h = cfg.h1;
	c.rich = cfg.richardson;
	c.p1 = time_shifted_system(sys, {{t, +cfg.h1}});
	c.m1 = time_shifted_system(sys, {{t, -cfg.h1}});
	if (cfg.richardson) {
		c.p2 = time_shifted_system(sys, {{t, +cfg.h1 / 2}});
		c.m2 = time_shifted_system(sys, {{t, -cfg.h1 / 2}});
	}
	return c;
}

TimeIndex first_level_time(int a) { return TimeIndex{1, a - 1}; }

/** Value of the time polynomial t(x) = sum_q t_q x^q. */
double time_polynomial(const FlowState &state, const Eigen::VectorXd &x)
{
	const int D = static_cast<int>(x.size());
	double t = 0.0;
	for (size_t j = 0; j < state.times.size(); ++j)
		t += state.times[j].dot(eval_chi_level(
		    enumerate_level(D, static_cast<int>(j) + 1), x));
	return t;
}

/** Baker function block psi_[k](x) = P_[k](x) e^{t(x)}. */
Extract baker_extract(int k, const Eigen::VectorXd &x)
{
	return [k, x](const PolynomialSystem &s) {
		return Eigen::MatrixXd(eval_P(s, k, x) *
		                       std::exp(time_polynomial(s.state, x)));
	};
}

Eigen::MatrixXd lam(int D, int a, int k) { return shift_block(D, a, k); }

/** Strictly block-lower part. */
Eigen::MatrixXd lower_part(const BlockMatrix &M)
{
	const BlockStructure &s = M.structure();
	Eigen::MatrixXd L = Eigen::MatrixXd::Zero(s.total, s.total);
	for (int k = 1; k < s.L; ++k)
		for (int l = 0; l < k; ++l)
			L.block(s.offsets[k], s.offsets[l], s.sizes[k],
			        s.sizes[l]) = M.block(k, l);
	return L;
}

} // namespace

TimeIndex time_index(int D, const MultiIndex &q)
{
	int lvl = degree(q);
	if (lvl < 1)
		throw OutOfRange("time_index: constant time is not a flow");
	return {lvl, position_in_level(enumerate_level(D, lvl), q)};
}

PolynomialSystem
time_shifted_system(const PolynomialSystem &sys,
                    const std::vector<std::pair<TimeIndex, double>> &shifts)
{
	FlowState s = sys.state;
	int K = s.K();
	for (const auto &sh : shifts)
		K = std::max(K, sh.first.level);
	s.resize_times(sys.spec.D, K);
	for (const auto &sh : shifts)
		s.times[sh.first.level - 1][sh.first.pos] += sh.second;
	return build_system(sys.spec, s, sys.L, sys.B, sys.rule.per_axis);
}

Eigen::MatrixXd factor_time_derivative(const PolynomialSystem &sys, Factor f,
                                       int k,
                                       const std::vector<TimeIndex> &times,
                                       const FdConfig &cfg)
{
	Extract ex = factor_extract(f, k);
	switch (times.size()) {
	case 1:
		return fd1(sys, times[0], ex, cfg);
	case 2:
		return fd2(sys, times[0], times[1], ex, cfg);
	case 3:
		return fd3(sys, times[0], times[1], times[2], ex, cfg);
	default:
		throw OutOfRange(
		    "factor_time_derivative: order must be 1, 2 or 3");
	}
}

LaxResiduals lax_residuals(const PolynomialSystem &sys, int a,
                           const FdConfig &cfg)
{
	const BlockStructure &s = sys.structure();
	const int D = sys.spec.D;
	const int LT = s.L;
	Fd1Cache fd = make_fd1(sys, first_level_time(a), cfg);

	LaxResiduals r{0.0, 0.0, 0.0};
	{
		Eigen::MatrixXd dS = fd.d(
		    [](const PolynomialSystem &p) { return p.F.S.dense(); });
		Eigen::MatrixXd X = dS * sys.F.Sinv.dense();
		Eigen::MatrixXd Jm = lower_part(
		    jacobi_matrix(sys, Eigen::VectorXd::Unit(D, a - 1)));
		const int rows = s.offsets[LT - 1];
		r.dS = rel((X + Jm).topRows(rows), Jm.topRows(rows));
	}
	for (int k = 0; k + 1 < LT; ++k) {
		Eigen::MatrixXd dH = fd.d(
		    [k](const PolynomialSystem &p) { return p.H(k); });
		Eigen::MatrixXd lhs =
		    solve_guarded(sys.H(k).transpose(), dH.transpose())
		        .transpose();
		Eigen::MatrixXd rhs = -lam(D, a, k) * sys.beta(k + 1);
		if (k >= 1)
			rhs += sys.beta(k) * lam(D, a, k - 1);
		r.dH = std::max(r.dH, rel(lhs - rhs, rhs));

		Eigen::MatrixXd db = fd.d(
		    [k](const PolynomialSystem &p) { return p.beta(k + 1); });
		Eigen::MatrixXd lhs2 =
		    sys.H(k + 1) *
		    solve_guarded(sys.H(k), lam(D, a, k)).transpose();
		r.dBeta = std::max(r.dBeta, rel(lhs2 + db, lhs2));
	}
	return r;
}

double toda_equation_residual(const PolynomialSystem &sys, int a, int b,
                              int k, const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 0 || k + 2 > sys.total_levels())
		throw OutOfRange("toda_equation_residual: level out of range");
	Extract Hk = factor_extract(Factor::H, k);
	TimeIndex ta = first_level_time(a), tb = first_level_time(b);
	Eigen::MatrixXd dHa = fd1(sys, ta, Hk, cfg);
	Eigen::MatrixXd dHb = fd1(sys, tb, Hk, cfg);
	Eigen::MatrixXd d2H = fd2(sys, ta, tb, Hk, cfg);
	Eigen::MatrixXd lhs = inv_times(d2H, sys.H(k)) -
	                      inv_times(dHa, sys.H(k)) *
	                          inv_times(dHb, sys.H(k));
	Eigen::MatrixXd rhs =
	    lam(D, a, k) *
	    inv_times(Eigen::MatrixXd(sys.H(k + 1) * lam(D, b, k).transpose()),
	              sys.H(k));
	if (k >= 1)
		rhs -= sys.H(k) *
		       inv_times(lam(D, b, k - 1).transpose(), sys.H(k - 1)) *
		       lam(D, a, k - 1);
	return rel(lhs - rhs, rhs);
}

double toda_beta_equation_residual(const PolynomialSystem &sys, int a, int b,
                                   int k, const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 2 > sys.total_levels())
		throw OutOfRange(
		    "toda_beta_equation_residual: level out of range");
	TimeIndex ta = first_level_time(a), tb = first_level_time(b);
	Extract bk = factor_extract(Factor::Beta, k);
	Eigen::MatrixXd d2b = fd2(sys, ta, tb, bk, cfg);
	Eigen::MatrixXd dba = fd1(sys, ta, bk, cfg);
	Eigen::MatrixXd Lb = lam(D, b, k - 1); // ([k-1],[k])
	Eigen::MatrixXd rhs = -(dba * Lb * sys.beta(k) +
	                        sys.beta(k) * Lb * dba) +
	                      lam(D, b, k) * sys.beta(k + 1) * dba;
	if (k >= 2)
		rhs += dba * sys.beta(k - 1) * lam(D, b, k - 2);
	return rel(d2b - rhs, rhs);
}

std::pair<double, double> toda_mixed_residuals(const PolynomialSystem &sys,
                                               const PolynomialSystem &Tb,
                                               int a, int b, int k,
                                               const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 2 > sys.total_levels())
		throw OutOfRange("toda_mixed_residuals: level out of range");
	const Eigen::VectorXd nb = sys.state.N.row(b - 1);
	Extract Hk = factor_extract(Factor::H, k);
	TimeIndex ta = first_level_time(a);
	Eigen::MatrixXd dHa = fd1(sys, ta, Hk, cfg);
	Eigen::MatrixXd dHa_Tb = fd1(Tb, ta, Hk, cfg);
	Eigen::MatrixXd Bb_k = dot_lambda_block(nb, k);
	Eigen::MatrixXd Bb_km = dot_lambda_block(nb, k - 1);

	// Delta_b of the logarithmic t_a-derivative of H_[k]
	Eigen::MatrixXd lhs1 =
	    inv_times(dHa_Tb, Tb.H(k)) - inv_times(dHa, sys.H(k));
	Eigen::MatrixXd rhs1 =
	    lam(D, a, k) *
	        inv_times(Eigen::MatrixXd(sys.H(k + 1) * Bb_k.transpose()),
	                  Tb.H(k)) -
	    sys.H(k) * inv_times(Bb_km.transpose(), Tb.H(k - 1)) *
	        lam(D, a, k - 1);
	double res1 = rel(lhs1 - rhs1, rhs1);

	// t_a-derivative of the logarithmic b-difference of H_[k]
	Eigen::MatrixXd lhs2 =
	    inv_times(dHa_Tb - dHa, sys.H(k)) -
	    inv_times(Eigen::MatrixXd(Tb.H(k) - sys.H(k)), sys.H(k)) *
	        inv_times(dHa, sys.H(k));
	Eigen::MatrixXd rhs2 =
	    Bb_k * inv_times(Eigen::MatrixXd(sys.H(k + 1) *
	                                     lam(D, a, k).transpose()),
	                     sys.H(k)) -
	    Tb.H(k) * inv_times(lam(D, a, k - 1).transpose(), Tb.H(k - 1)) *
	        Bb_km;
	double res2 = rel(lhs2 - rhs2, rhs2);
	return {res1, res2};
}

std::pair<double, double> beta_tau_chain(const PolynomialSystem &sys, int k,
                                         const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 0 || k + 2 > sys.total_levels())
		throw OutOfRange("beta_tau_chain: level out of range");

	auto stack_lambda = [&](int j) {
		const int sj = static_cast<int>(level_size(D, j));
		const int sj1 = static_cast<int>(level_size(D, j + 1));
		Eigen::MatrixXd L(D * sj, sj1);
		for (int a = 1; a <= D; ++a)
			L.middleRows((a - 1) * sj, sj) = lam(D, a, j);
		return L;
	};
	auto log_deriv = [&](int j) {
		const int sj = static_cast<int>(level_size(D, j));
		Extract Hj = factor_extract(Factor::H, j);
		Eigen::MatrixXd G(D * sj, sj);
		for (int a = 1; a <= D; ++a) {
			Eigen::MatrixXd dH =
			    fd1(sys, first_level_time(a), Hj, cfg);
			G.middleRows((a - 1) * sj, sj) =
			    solve_guarded(sys.H(j).transpose(), dH.transpose())
			        .transpose();
		}
		return G;
	};
	auto blkdiag = [&](const Eigen::MatrixXd &B) {
		Eigen::MatrixXd M = Eigen::MatrixXd::Zero(D * B.rows(),
		                                          D * B.cols());
		for (int a = 0; a < D; ++a)
			M.block(a * B.rows(), a * B.cols(), B.rows(),
			        B.cols()) = B;
		return M;
	};
	auto step = [&](const Eigen::MatrixXd &Bj, int j) {
		Eigen::MatrixXd pinv =
		    pseudo_inverse_full_column_rank(stack_lambda(j));
		return Eigen::MatrixXd(-pinv * log_deriv(j) +
		                       pinv * blkdiag(Bj) * stack_lambda(j - 1));
	};

	Eigen::MatrixXd B1 = -log_deriv(0);
	Eigen::MatrixXd one_step =
	    (k == 0) ? B1 : step(sys.beta(k), k);
	double res1 = rel(one_step - sys.beta(k + 1), sys.beta(k + 1));

	Eigen::MatrixXd B = B1;
	for (int j = 1; j <= k; ++j)
		B = step(B, j);
	double res2 = rel(B - sys.beta(k + 1), sys.beta(k + 1));
	return {res1, res2};
}

std::vector<Eigen::VectorXd> miwa_shift_vector(const Eigen::VectorXd &n,
                                               double q, int K)
{
	if (q == 0.0)
		throw OutOfRange("miwa_shift_vector: q must be nonzero");
	const int D = static_cast<int>(n.size());
	std::vector<Eigen::VectorXd> blocks(K);
	Eigen::VectorXd scaled = n / q;
	for (int k = 1; k <= K; ++k) {
		LevelBasis basis = enumerate_level(D, k);
		blocks[k - 1] =
		    (1.0 / k) * multinomial_diagonal(D, k).asDiagonal() *
		    eval_chi_level(basis, scaled);
	}
	return blocks;
}

double miwa_consistency_check(const MeasureSpec &spec,
                              const Eigen::VectorXd &n, double q, int K,
                              int L, int B, int quad_order)
{
	if (!n.isZero())
		check_validity_region(spec, n, q);
	FlowState shifted = FlowState::trivial(spec.D);
	shifted.resize_times(spec.D, K);
	std::vector<Eigen::VectorXd> blocks = miwa_shift_vector(n, q, K);
	for (int k = 1; k <= K; ++k)
		shifted.times[k - 1] = blocks[k - 1];
	PolynomialSystem truncated =
	    build_system(spec, shifted, L, B, quad_order);

	MeasureSpec exact = spec;
	exact.kind = WeightKind::Callback;
	exact.callback = [spec, n, q](const Eigen::VectorXd &x) {
		return spec.base_weight(x) / (1.0 - n.dot(x) / q);
	};
	PolynomialSystem reference =
	    build_system(exact, FlowState::trivial(spec.D), L, B, quad_order);

	double dev = 0.0;
	for (int k = 0; k < truncated.total_levels(); ++k)
		dev = std::max(dev, (truncated.H(k) - reference.H(k)).norm() /
		                        reference.H(k).norm());
	return dev;
}

double kp_teo3_residual(const PolynomialSystem &sys,
                        const PolynomialSystem &Ta,
                        const PolynomialSystem &Tb,
                        const PolynomialSystem &Tab, int a, int b, int k,
                        const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 1 > sys.total_levels())
		throw OutOfRange("kp_teo3_residual: level out of range");
	const int szm = static_cast<int>(level_size(D, k - 1));

	// E_dir[k] = d beta_[k]/dt_dir + (Delta_dir beta_[k])(q_dir +
	// (Lambda_dir beta)_[k-1]) at a given lattice corner
	auto E = [&](const PolynomialSystem &base,
	             const PolynomialSystem &stepped, int dir) {
		Extract bk = factor_extract(Factor::Beta, k);
		Eigen::MatrixXd db = fd1(base, first_level_time(dir), bk, cfg);
		Eigen::MatrixXd jump = stepped.beta(k) - base.beta(k);
		Eigen::MatrixXd inner =
		    sys.state.q[dir - 1] *
		        Eigen::MatrixXd::Identity(szm, szm) +
		    lam(D, dir, k - 1) * base.beta(k);
		return Eigen::MatrixXd(db + jump * inner);
	};
	Eigen::MatrixXd lhs =
	    (E(Tb, Tab, a) - E(sys, Ta, a)) * lam(D, b, k - 1);
	Eigen::MatrixXd rhs =
	    (E(Ta, Tab, b) - E(sys, Tb, b)) * lam(D, a, k - 1);
	return rel(lhs - rhs, rhs);
}

double schrodinger_residual(const PolynomialSystem &sys, int a, int b, int k,
                            const Eigen::VectorXd &x, const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 1 > sys.total_levels())
		throw OutOfRange("schrodinger_residual: level out of range");
	Extract psi = baker_extract(k, x);
	MultiIndex qab(D, 0);
	qab[a - 1] += 1;
	qab[b - 1] += 1;
	TimeIndex ta = first_level_time(a), tb = first_level_time(b);
	Eigen::MatrixXd lhs = fd1(sys, time_index(D, qab), psi, cfg);
	Eigen::MatrixXd mix = fd2(sys, ta, tb, psi, cfg);
	Extract bk = factor_extract(Factor::Beta, k);
	Eigen::MatrixXd U =
	    -fd1(sys, ta, bk, cfg) * lam(D, b, k - 1) -
	    fd1(sys, tb, bk, cfg) * lam(D, a, k - 1);
	Eigen::MatrixXd psi0 = psi(sys);
	return rel(lhs - mix - U * psi0, lhs);
}

double third_order_residual(const PolynomialSystem &sys, int a, int b, int c,
                            int k, const Eigen::VectorXd &x,
                            const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 1 > sys.total_levels())
		throw OutOfRange("third_order_residual: level out of range");
	Extract psi = baker_extract(k, x);
	Extract bk = factor_extract(Factor::Beta, k);
	TimeIndex ta = first_level_time(a), tb = first_level_time(b),
	          tc = first_level_time(c);
	MultiIndex qabc(D, 0);
	qabc[a - 1] += 1;
	qabc[b - 1] += 1;
	qabc[c - 1] += 1;

	Eigen::MatrixXd lhs = fd1(sys, time_index(D, qabc), psi, cfg);
	Eigen::MatrixXd d3 = fd3(sys, ta, tb, tc, psi, cfg);
	Eigen::MatrixXd dpsi_a = fd1(sys, ta, psi, cfg);
	Eigen::MatrixXd dpsi_b = fd1(sys, tb, psi, cfg);
	Eigen::MatrixXd dpsi_c = fd1(sys, tc, psi, cfg);
	Eigen::MatrixXd dba = fd1(sys, ta, bk, cfg);
	Eigen::MatrixXd dbb = fd1(sys, tb, bk, cfg);
	Eigen::MatrixXd dbc = fd1(sys, tc, bk, cfg);
	Eigen::MatrixXd Vab = dba * lam(D, b, k - 1);
	Eigen::MatrixXd Vca = dbc * lam(D, a, k - 1);
	Eigen::MatrixXd Vbc = dbb * lam(D, c, k - 1);
	Eigen::MatrixXd dVab_c = fd2(sys, ta, tc, bk, cfg) * lam(D, b, k - 1);
	Eigen::MatrixXd dVbc_a = fd2(sys, tb, ta, bk, cfg) * lam(D, c, k - 1);
	Eigen::MatrixXd dVca_b = fd2(sys, tc, tb, bk, cfg) * lam(D, a, k - 1);
	auto bracket = [&](int mid) {
		// beta_[k-1] (Lambda_mid)_([k-2],[k-1]) -
		// (Lambda_mid)_([k-1],[k]) beta_[k]
		Eigen::MatrixXd M = -lam(D, mid, k - 1) * sys.beta(k);
		if (k >= 2)
			M += sys.beta(k - 1) * lam(D, mid, k - 2);
		return M;
	};
	Eigen::MatrixXd Vabc = dba * bracket(b) * lam(D, c, k - 1);
	Eigen::MatrixXd Vbca = dbb * bracket(c) * lam(D, a, k - 1);
	Eigen::MatrixXd Vcba = dbc * bracket(b) * lam(D, a, k - 1);
	Eigen::MatrixXd psi0 = psi(sys);
	Eigen::MatrixXd rhs =
	    d3 - Vab * dpsi_c - Vca * dpsi_b - Vbc * dpsi_a -
	    (dVab_c + dVbc_a + dVca_b + Vabc + Vbca + Vcba) * psi0;
	return rel(lhs - rhs, lhs);
}

double teo4_residual(const PolynomialSystem &sys, int A, int B, int k,
                     const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 1 || k + 1 > sys.total_levels())
		throw OutOfRange("teo4_residual: level out of range");
	Extract bk = factor_extract(Factor::Beta, k);
	TimeIndex tA = first_level_time(A), tB = first_level_time(B);
	MultiIndex qAA(D, 0), qBB(D, 0);
	qAA[A - 1] = 2;
	qBB[B - 1] = 2;
	TimeIndex tAA = time_index(D, qAA), tBB = time_index(D, qBB);
	Eigen::MatrixXd LA = lam(D, A, k - 1), LB = lam(D, B, k - 1);

	Eigen::MatrixXd lhs = fd2(sys, tBB, tA, bk, cfg) * LA -
	                      fd2(sys, tAA, tB, bk, cfg) * LB;
	Eigen::MatrixXd dbx = fd1(sys, tA, bk, cfg);
	Eigen::MatrixXd dby = fd1(sys, tB, bk, cfg);
	Eigen::MatrixXd d2xy = fd2(sys, tA, tB, bk, cfg);
	Eigen::MatrixXd d3xxy = fd3(sys, tA, tA, tB, bk, cfg);
	Eigen::MatrixXd d3xyy = fd3(sys, tA, tB, tB, bk, cfg);
	Eigen::MatrixXd P = dbx * LA, Q = dby * LB;
	Eigen::MatrixXd rhs =
	    d3xxy * LB - d3xyy * LA + 2.0 * (P * Q - Q * P) +
	    2.0 * d2xy * (LB * sys.beta(k) * LA - LA * sys.beta(k) * LB);
	return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
}

double beta2_system_residual(const PolynomialSystem &sys, int a, int b,
                             int k, const FdConfig &cfg)
{
	const int D = sys.spec.D;
	if (k < 2 || k + 1 > sys.total_levels())
		throw OutOfRange("beta2_system_residual: level out of range");
	Extract bk = factor_extract(Factor::Beta, k);
	Extract b2k = factor_extract(Factor::Beta2, k);
	TimeIndex ta = first_level_time(a), tb = first_level_time(b);
	MultiIndex qaa(D, 0);
	qaa[a - 1] = 2;
	TimeIndex taa = time_index(D, qaa);

	Eigen::MatrixXd lhs = fd2(sys, ta, tb, b2k, cfg) * lam(D, a, k - 2);

	auto bracket = [&](const PolynomialSystem &base) {
		Eigen::MatrixXd db = fd1(base, ta, bk, cfg);
		Eigen::MatrixXd d2 = fd_nested(base, {}, {ta, ta}, 0, bk,
		                               cfg.h2);
		Eigen::MatrixXd daa = fd1(base, taa, bk, cfg);
		return Eigen::MatrixXd(db * lam(D, a, k - 1) * base.beta(k) -
		                       0.5 * d2 + 0.5 * daa);
	};
	PolynomialSystem plus = time_shifted_system(sys, {{tb, +cfg.h2}});
	PolynomialSystem minus = time_shifted_system(sys, {{tb, -cfg.h2}});
	Eigen::MatrixXd rhs =
	    (bracket(plus) - bracket(minus)) / (2.0 * cfg.h2);
	return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
}

double difference_differential_residual(const PolynomialSystem &sys,
                                        const PolynomialSystem &Ta, int a,
                                        int k, const Eigen::VectorXd &x,
                                        const FdConfig &cfg)
{
	const int D = sys.spec.D;
	Extract Pk = [k, &x](const PolynomialSystem &s) {
		return Eigen::MatrixXd(eval_P(s, k, x));
	};
	Eigen::MatrixXd lhs = fd1(sys, first_level_time(a), Pk, cfg);
	double qa = sys.state.q[a - 1];
	Eigen::VectorXd P0 = eval_P(sys, k, x);
	Eigen::MatrixXd rhs =
	    (x[a - 1] - qa) * (eval_P(Ta, k, x) - P0);
	if (k >= 1)
		rhs -= (Ta.beta(k) - sys.beta(k)) * lam(D, a, k - 1) * P0;
	return rel(lhs - rhs, rhs);
}

} // namespace mvopr
