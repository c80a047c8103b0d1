#include "mvopr/suites.hpp"

#include "mvopr/darboux.hpp"
#include "mvopr/errors.hpp"
#include "mvopr/rng.hpp"
#include "mvopr/shift.hpp"
#include "mvopr/symmetry.hpp"
#include "mvopr/toda.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace mvopr {

namespace {

using Rows = std::vector<ReportRow>;

double rel(const Eigen::MatrixXd &diff, const Eigen::MatrixXd &ref)
{
	return diff.norm() / std::max(1.0, ref.norm());
}

void add(Rows &rows, const std::string &suite, const std::string &identity,
         const std::string &anchor, int levels, double residual,
         double tolerance)
{
	rows.push_back(ReportRow{suite, identity, anchor, levels, residual,
	                         tolerance,
	                         std::isfinite(residual) &&
	                             residual < tolerance,
	                         0});
}

int default_quad(int D) { return D <= 2 ? 64 : 32; }

/** The configured measure re-expressed in dimension D (falls back to the
 *  Lebesgue box when the weight does not transfer). */
MeasureSpec spec_with_dim(const SuiteConfig &cfg, int D)
{
	if (cfg.spec.D == D)
		return cfg.spec;
	if (cfg.spec.kind == WeightKind::JacobiProduct)
		return MeasureSpec::jacobi_box(D, cfg.spec.jacobi_alpha[0],
		                               cfg.spec.jacobi_beta[0]);
	return MeasureSpec::lebesgue_box(D);
}

PolynomialSystem build_for(const SuiteConfig &cfg, int D)
{
	int q = cfg.quad_order > 0 ? cfg.quad_order : default_quad(D);
	return build_system(spec_with_dim(cfg, D), FlowState::trivial(D),
	                    cfg.L, cfg.B, q);
}

Eigen::VectorXd box_point(Xoshiro256 &rng, const MeasureSpec &spec)
{
	Eigen::VectorXd x(spec.D);
	for (int a = 0; a < spec.D; ++a)
		x[a] = rng.uniform(spec.lo[a], spec.hi[a]);
	return x;
}

Eigen::VectorXd unit_direction(Xoshiro256 &rng, int D)
{
	Eigen::VectorXd n(D);
	do {
		for (int a = 0; a < D; ++a)
			n[a] = rng.uniform(-1.0, 1.0);
	} while (n.norm() < 0.2);
	n.normalize();
	return n;
}

Eigen::VectorXd outside_point(const MeasureSpec &spec, double margin)
{
	Eigen::VectorXd z(spec.D);
	for (int a = 0; a < spec.D; ++a)
		z[a] = spec.hi[a] + margin + 0.1 * a;
	return z;
}

Eigen::MatrixXd block_diag_H(const PolynomialSystem &sys)
{
	const BlockStructure &s = sys.structure();
	Eigen::MatrixXd H = Eigen::MatrixXd::Zero(s.total, s.total);
	for (int k = 0; k < s.L; ++k)
		H.block(s.offsets[k], s.offsets[k], s.sizes[k], s.sizes[k]) =
		    sys.H(k);
	return H;
}

Rows suite_orthogonality(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, cfg.spec.D);
	const Eigen::MatrixXd &G = sys.M.G.dense();
	const Eigen::MatrixXd &S = sys.F.S.dense();
	double res = (S * G * S.transpose() - block_diag_H(sys)).norm() /
	             G.norm();
	add(rows, "orthogonality", "factorization", "eq. cholesky", cfg.L,
	    res, 1e-11);

	double gram = 0.0;
	for (int k = 0; k < cfg.L; ++k)
		for (int l = 0; l <= k; ++l) {
			Eigen::MatrixXd g = gram_block(sys, k, l);
			if (k == l)
				g -= sys.H(k);
			gram = std::max(gram, g.norm() / sys.H(k).norm());
		}
	add(rows, "orthogonality", "gram-blocks", "eq. orth", cfg.L, gram,
	    1e-10);
	return rows;
}

Rows suite_quasidet(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, cfg.spec.D);
	const BlockStructure &s = sys.structure();
	double resH = 0.0;
	for (int k = 0; k < cfg.L; ++k) {
		Eigen::MatrixXd Hq =
		    theta_star(sys.M.G.truncation(k + 1).dense(),
		               s.sizes[k], s.sizes[k]);
		resH = std::max(resH, rel(Hq - sys.H(k), sys.H(k)));
	}
	add(rows, "quasidet", "quasi-tau-blocks", "Theta_*(G^[k+1])", cfg.L,
	    resH, 1e-10);

	Xoshiro256 rng(cfg.seed);
	double resP = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd x = box_point(rng, sys.spec);
		for (int l = 0; l < cfg.L; ++l)
			resP = std::max(
			    resP, (eval_P(sys, l, x) -
			           eval_P_quasideterminant(sys, l, x))
			              .norm());
	}
	add(rows, "quasidet", "polynomial-route", "Theta_* bordered", cfg.L,
	    resP, 1e-10);
	return rows;
}

Rows suite_three_term(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, cfg.spec.D);
	Xoshiro256 rng(cfg.seed);
	double res = 0.0;
	for (int rep = 0; rep < 20; ++rep) {
		Eigen::VectorXd x = box_point(rng, sys.spec);
		Eigen::VectorXd n = unit_direction(rng, sys.spec.D);
		for (int k = 1; k < cfg.L; ++k)
			res = std::max(res,
			               three_term_residual(sys, n, k, x));
	}
	add(rows, "three-term", "mvopr-recurrence", "three-term relation",
	    cfg.L, res, 1e-10);

	const BlockStructure &s = sys.structure();
	Eigen::VectorXd n = unit_direction(rng, sys.spec.D);
	Eigen::MatrixXd J = jacobi_matrix(sys, n).dense();
	Eigen::MatrixXd Je = jacobi_matrix_explicit(sys, n).dense();
	const int r = s.offsets[s.L - 1];
	add(rows, "three-term", "jacobi-dressing", "J = S Lambda S^{-1}",
	    cfg.L, rel((J - Je).topRows(r), J.topRows(r)), 1e-10);
	return rows;
}

Rows suite_cd(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, cfg.spec.D);
	Xoshiro256 rng(cfg.seed);
	double res = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd x = box_point(rng, sys.spec);
		Eigen::VectorXd y = box_point(rng, sys.spec);
		Eigen::VectorXd n = unit_direction(rng, sys.spec.D);
		for (int l = 1; l < cfg.L; ++l)
			res = std::max(res,
			               cd_formula_residual(sys, l, n, x, y));
	}
	add(rows, "cd", "cd-formula", "eq. kerr", cfg.L, res, 1e-9);

	// the kernel projects degree < l polynomials onto themselves
	const BlockStructure &s = sys.structure();
	double proj = 0.0;
	for (int l = 1; l < cfg.L; ++l) {
		std::vector<Eigen::VectorXd> c(l);
		for (int k = 0; k < l; ++k) {
			c[k].resize(s.sizes[k]);
			for (int i = 0; i < s.sizes[k]; ++i)
				c[k][i] = rng.uniform(-1.0, 1.0);
		}
		auto p = [&](const Eigen::VectorXd &z) {
			double v = 0.0;
			for (int k = 0; k < l; ++k)
				v += c[k].dot(eval_P(sys, k, z));
			return v;
		};
		Eigen::VectorXd x = box_point(rng, sys.spec);
		double want = p(x);
		double got = integrate(sys.rule, sys.state,
		                       [&](const Eigen::VectorXd &z) {
			                       return cd_kernel(sys, l, x, z) *
			                              p(z);
		                       });
		proj = std::max(proj, std::abs(got - want) /
		                          std::max(1.0, std::abs(want)));
	}
	add(rows, "cd", "reproducing-projection", "reproducing kernel",
	    cfg.L, proj, 1e-9);
	return rows;
}

Rows suite_secondkind(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, cfg.spec.D);
	Xoshiro256 rng(cfg.seed);
	Eigen::VectorXd z = outside_point(sys.spec, 0.9);
	double res = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd n = unit_direction(rng, sys.spec.D);
		for (int k = 1; k + 1 < cfg.L; ++k)
			res = std::max(res, secondkind_three_term_residual(
			                        sys, n, k, z));
	}
	add(rows, "secondkind", "secondkind-recurrence",
	    "second kind three-term", cfg.L, res, 1e-8);

	Eigen::VectorXd x = outside_point(sys.spec, 0.7);
	Eigen::VectorXd y = outside_point(sys.spec, 1.3);
	double resq = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd n = unit_direction(rng, sys.spec.D);
		for (int l = 1; l < cfg.L; ++l)
			resq = std::max(resq,
			                q_kernel_residual(sys, l, n, x, y));
	}
	add(rows, "secondkind", "q-kernel", "eq. kerQQ", cfg.L, resq, 1e-7);
	return rows;
}

Rows suite_darboux(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, 2);
	Xoshiro256 rng(cfg.seed);

	DarbouxStep step{Eigen::Vector2d(std::cos(0.4), std::sin(0.4)),
	                 -2.0};
	PolynomialSystem tsys = transformed_system(sys, {step});
	double resP = 0.0, resH = 0.0;
	for (int k = 0; k + 2 <= cfg.L; ++k) {
		auto nodes = poised_node_sets(sys, {step}, k, rng);
		for (int rep = 0; rep < 3; ++rep) {
			Eigen::VectorXd x = box_point(rng, sys.spec);
			resP = std::max(
			    resP,
			    rel(christoffel_P(sys, {step}, nodes, k, x) -
			            eval_P(tsys, k, x),
			        eval_P(tsys, k, x)));
		}
		resH = std::max(resH,
		                rel(christoffel_H(sys, {step}, nodes, k) -
		                        tsys.H(k),
		                    tsys.H(k)));
	}
	add(rows, "darboux", "elementary-transformation",
	    "Christoffel formula", cfg.L, std::max(resP, resH), 1e-8);

	std::vector<DarbouxStep> steps2{
	    {Eigen::Vector2d(std::cos(0.3), std::sin(0.3)), -2.0},
	    {Eigen::Vector2d(std::cos(1.2), std::sin(1.2)), -2.5}};
	PolynomialSystem tsys2 = transformed_system(sys, steps2);
	double res2 = 0.0;
	for (int k = 0; k <= 2 && k + 3 <= cfg.L + cfg.B; ++k) {
		auto nodes = poised_node_sets(sys, steps2, k, rng);
		Eigen::VectorXd x = box_point(rng, sys.spec);
		res2 = std::max(res2,
		                rel(christoffel_P(sys, steps2, nodes, k, x) -
		                        eval_P(tsys2, k, x),
		                    eval_P(tsys2, k, x)));
		res2 = std::max(res2,
		                rel(christoffel_H(sys, steps2, nodes, k) -
		                        tsys2.H(k),
		                    tsys2.H(k)));
	}
	add(rows, "darboux", "two-step-transformation",
	    "iterated Christoffel formula", cfg.L, res2, 1e-7);

	double resn = 0.0;
	{
		auto nodes1 = poised_node_sets(sys, {step}, 1, rng);
		auto nodes2 = poised_node_sets(sys, {step}, 1, rng);
		Eigen::VectorXd x = box_point(rng, sys.spec);
		resn = rel(christoffel_P(sys, {step}, nodes1, 1, x) -
		               christoffel_P(sys, {step}, nodes2, 1, x),
		           christoffel_P(sys, {step}, nodes1, 1, x));
	}
	add(rows, "darboux", "node-independence", "poised sample sets",
	    cfg.L, resn, 1e-7);

	// 1D kernel-polynomial identity K^(l)(q, y) through the transform
	PolynomialSystem sys1 = build_for(cfg, 1);
	DarbouxStep step1{Eigen::VectorXd::Ones(1), -2.0};
	PolynomialSystem t1 = transformed_system(sys1, {step1});
	Eigen::VectorXd xq = Eigen::VectorXd::Constant(1, step1.q);
	double res1d = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd y = box_point(rng, sys1.spec);
		for (int l = 1; l < cfg.L; ++l) {
			double lhs = cd_kernel(sys1, l, xq, y);
			double rhs =
			    -(eval_P(sys1, l, xq).transpose() *
			      solve_guarded(t1.H(l - 1),
			                    eval_P(t1, l - 1, y)))(0);
			res1d = std::max(res1d, std::abs(lhs - rhs) /
			                            std::max(1.0,
			                                     std::abs(lhs)));
		}
	}
	add(rows, "darboux", "kernel-polynomial-1d", "eq. darboux1D", cfg.L,
	    res1d, 1e-10);
	return rows;
}

Rows suite_christoffel(const SuiteConfig &cfg)
{
	Rows rows;
	Xoshiro256 rng(cfg.seed);

	// quasi-tau quotient route to P at the intersection point
	double resP = 0.0;
	{
		PolynomialSystem sys1 = build_for(cfg, 1);
		std::vector<PolynomialSystem> st1{stepped_system(sys1, 1)};
		for (int k = 0; k <= 3 && k < cfg.L; ++k)
			resP = std::max(
			    resP,
			    rel(tau_quotient_P(sys1, st1, k) -
			            eval_P(sys1, k,
			                   Eigen::VectorXd::Constant(1, -2.0)),
			        eval_P(sys1, k,
			               Eigen::VectorXd::Constant(1, -2.0))));
	}
	PolynomialSystem sys = build_for(cfg, 2);
	{
		std::vector<PolynomialSystem> st{stepped_system(sys, 1),
		                                 stepped_system(sys, 2)};
		Eigen::VectorXd q = Eigen::VectorXd::Constant(2, -2.0);
		for (int k = 0; k <= 3 && k < cfg.L; ++k)
			resP = std::max(resP,
			                rel(tau_quotient_P(sys, st, k) -
			                        eval_P(sys, k, q),
			                    eval_P(sys, k, q)));
	}
	add(rows, "christoffel", "tau-quotient-P", "theorem tauMVOPR",
	    cfg.L, resP, 1e-8);

	// quasi-tau sum route to the second kind values
	double resC = 0.0;
	{
		PolynomialSystem inv1 = stepped_system(sys, 2, -1);
		PolynomialSystem inv0 = stepped_system(inv1, 1, -1);
		std::vector<PolynomialSystem> inv{inv0, inv1, sys};
		Eigen::VectorXd q = Eigen::VectorXd::Constant(2, -2.0);
		for (int k = 0; k <= 2; ++k)
			resC = std::max(resC,
			                rel(tau_quotient_C(sys, inv, k) -
			                        eval_C(sys, k, q),
			                    eval_C(sys, k, q)));
	}
	add(rows, "christoffel", "tau-quotient-C", "teo1", cfg.L, resC,
	    1e-6);

	// kernel transformation identities
	DarbouxStep step{Eigen::Vector2d(std::cos(0.4), std::sin(0.4)),
	                 -2.0};
	PolynomialSystem tsys = transformed_system(sys, {step});
	double res1 = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd x = box_point(rng, sys.spec);
		Eigen::VectorXd y = box_point(rng, sys.spec);
		for (int l = 1; l < cfg.L; ++l)
			res1 = std::max(res1, cd_transform_residual(
			                          sys, tsys, step, l, x, y));
	}
	add(rows, "christoffel", "kernel-transform-1step",
	    "kernel connection, m = 1", cfg.L, res1, 1e-9);

	std::vector<DarbouxStep> steps2{
	    {Eigen::Vector2d(std::cos(0.3), std::sin(0.3)), -2.0},
	    {Eigen::Vector2d(std::cos(1.2), std::sin(1.2)), -2.5}};
	PolynomialSystem tsys2 = transformed_system(sys, steps2);
	double res2 = 0.0;
	for (int rep = 0; rep < 3; ++rep) {
		Eigen::VectorXd x = box_point(rng, sys.spec);
		Eigen::VectorXd y = box_point(rng, sys.spec);
		for (int l = 1; l + 2 <= cfg.L; ++l)
			res2 = std::max(res2,
			                cd_transform_residual_2step(
			                    sys, tsys2, steps2, l, x, y));
	}
	add(rows, "christoffel", "kernel-transform-2step",
	    "kernel connection, m = 2", cfg.L, res2, 1e-8);
	return rows;
}

Rows suite_discrete_toda(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, 2);
	PolynomialSystem Ta = stepped_system(sys, 1);
	PolynomialSystem Tb = stepped_system(sys, 2);
	PolynomialSystem Tab = stepped_system(Ta, 2);

	auto [lu1, ul1] = lu_ul_residuals(sys, Ta, 1);
	auto [lu2, ul2] = lu_ul_residuals(sys, Tb, 2);
	add(rows, "discrete-toda", "lu-ul-interchange",
	    "LU/UL interchange", cfg.L, std::max({lu1, ul1, lu2, ul2}),
	    1e-8);

	LaxZsResiduals z = discrete_laxzs_residuals(sys, Ta, Tb, Tab, 1, 2);
	add(rows, "discrete-toda", "discrete-lax", "discrete Lax pair",
	    cfg.L, std::max(z.lax_omega, z.lax_M), 1e-8);
	add(rows, "discrete-toda", "zakharov-shabat",
	    "discrete Zakharov-Shabat", cfg.L, std::max(z.zs_omega, z.zs_M),
	    1e-8);

	double rH = 0.0, rB = 0.0;
	for (int k = 1; k + 2 <= cfg.L; ++k) {
		auto [h, b] = discrete_toda_residuals(sys, Ta, Tb, Tab, 1, 2,
		                                      k);
		rH = std::max(rH, h);
		rB = std::max(rB, b);
	}
	add(rows, "discrete-toda", "toda-H-equation", "toda equations 1",
	    cfg.L, rH, 1e-8);
	add(rows, "discrete-toda", "toda-beta-equation", "toda equations 1",
	    cfg.L, rB, 1e-8);
	return rows;
}

Rows suite_lax(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, 2);
	LaxResiduals r1 = lax_residuals(sys, 1);
	LaxResiduals r2 = lax_residuals(sys, 2);
	add(rows, "lax", "s-flow", "dS/dt_a = -(J_a)_- S", cfg.L,
	    std::max(r1.dS, r2.dS), 1e-6);
	add(rows, "lax", "h-flow", "pro10", cfg.L, std::max(r1.dH, r2.dH),
	    1e-6);
	add(rows, "lax", "beta-flow", "pro10", cfg.L,
	    std::max(r1.dBeta, r2.dBeta), 1e-6);

	// order-2 convergence of the central difference against the
	// Richardson reference
	FdConfig rich, plain;
	plain.richardson = false;
	Eigen::MatrixXd ref = factor_time_derivative(sys, Factor::Beta, 2,
	                                             {{1, 0}}, rich);
	plain.h1 = 2e-3;
	Eigen::MatrixXd coarse = factor_time_derivative(
	    sys, Factor::Beta, 2, {{1, 0}}, plain);
	plain.h1 = 1e-3;
	Eigen::MatrixXd fine = factor_time_derivative(sys, Factor::Beta, 2,
	                                              {{1, 0}}, plain);
	double ratio = (coarse - ref).norm() / (fine - ref).norm();
	add(rows, "lax", "h-convergence", "central differences, order 2",
	    cfg.L, std::abs(ratio - 4.0), 0.5);
	return rows;
}

Rows suite_toda(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, 2);
	const int kmax = std::min(3, cfg.L + cfg.B - 2);
	double rH = 0.0, rB = 0.0;
	for (int k = 0; k <= kmax; ++k) {
		rH = std::max({rH, toda_equation_residual(sys, 1, 2, k),
		               toda_equation_residual(sys, 1, 1, k)});
		if (k >= 1)
			rB = std::max(
			    {rB, toda_beta_equation_residual(sys, 1, 2, k),
			     toda_beta_equation_residual(sys, 1, 1, k)});
	}
	add(rows, "toda", "toda-equation", "toda equations 2", cfg.L, rH,
	    1e-5);
	add(rows, "toda", "toda-beta-equation", "toda equations 2", cfg.L,
	    rB, 1e-5);

	PolynomialSystem Tb = stepped_system(sys, 2);
	double rM = 0.0;
	for (int k = 1; k <= kmax; ++k) {
		auto [m1, m2] = toda_mixed_residuals(sys, Tb, 1, 2, k);
		rM = std::max({rM, m1, m2});
	}
	add(rows, "toda", "mixed-difference-differential",
	    "mixed Toda equations", cfg.L, rM, 1e-6);

	double rC = 0.0;
	for (int k = 0; k <= 2; ++k) {
		auto [one, chain] = beta_tau_chain(sys, k);
		rC = std::max({rC, one, chain});
	}
	add(rows, "toda", "beta-tau-chain", "beta recurrence", cfg.L, rC,
	    1e-6);
	return rows;
}

Rows suite_miwa(const SuiteConfig &cfg)
{
	Rows rows;
	MeasureSpec spec1 = spec_with_dim(cfg, 1);
	Eigen::VectorXd n = Eigen::VectorXd::Ones(1);
	const double q = 3.0;

	double oracle = 0.0;
	auto blocks = miwa_shift_vector(n, q, 8);
	for (int k = 1; k <= 8; ++k)
		oracle = std::max(oracle,
		                  std::abs(blocks[k - 1](0) -
		                           1.0 / (k * std::pow(q, k))));
	add(rows, "miwa", "shift-blocks", "coherent shift [q]_n", cfg.L,
	    oracle, 1e-12);

	const int quad = cfg.quad_order > 0 ? cfg.quad_order : 64;
	std::vector<double> dev;
	for (int K = 4; K <= 8; ++K)
		dev.push_back(
		    miwa_consistency_check(spec1, n, q, K, 3, 1, quad));
	add(rows, "miwa", "truncation-K8", "Miwa shift consistency", 3,
	    dev.back(), 1e-3);

	double slope = 0.0;
	for (size_t i = 0; i + 1 < dev.size(); ++i)
		slope += std::log(dev[i + 1] / dev[i]);
	slope /= static_cast<double>(dev.size() - 1);
	const double target = std::log(1.0 / q);
	add(rows, "miwa", "geometric-ratio", "Miwa shift consistency", 3,
	    std::abs(slope - target) / std::abs(target), 0.2);
	return rows;
}

Rows suite_kp(const SuiteConfig &cfg)
{
	Rows rows;
	PolynomialSystem sys = build_for(cfg, 2);
	PolynomialSystem Ta = stepped_system(sys, 1);
	PolynomialSystem Tb = stepped_system(sys, 2);
	PolynomialSystem Tab = stepped_system(Ta, 2);
	Xoshiro256 rng(cfg.seed);
	Eigen::VectorXd x = box_point(rng, sys.spec);

	double r3 = 0.0;
	for (int k = 1; k <= std::min(3, cfg.L - 1); ++k)
		r3 = std::max(r3,
		              kp_teo3_residual(sys, Ta, Tb, Tab, 1, 2, k));
	add(rows, "kp", "difference-differential-compatibility", "teo3",
	    cfg.L, r3, 1e-5);

	double rs = 0.0;
	for (int k = 1; k <= 2; ++k)
		rs = std::max({rs, schrodinger_residual(sys, 1, 2, k, x),
		               schrodinger_residual(sys, 1, 1, k, x)});
	add(rows, "kp", "schrodinger", "eq. linear.wave", cfg.L, rs, 1e-5);

	double rt = 0.0;
	for (int k = 1; k <= 2; ++k)
		rt = std::max(rt, third_order_residual(sys, 1, 2, 2, k, x));
	add(rows, "kp", "third-order", "latriple", cfg.L, rt, 1e-4);

	double r4 = std::max(teo4_residual(sys, 1, 2, 1),
	                     teo4_residual(sys, 1, 2, 2));
	add(rows, "kp", "two-variable-reduction", "teo4", cfg.L, r4, 1e-4);

	add(rows, "kp", "beta2-system", "beta/beta2 coupling", cfg.L,
	    beta2_system_residual(sys, 1, 2, 2), 1e-4);

	double rd = 0.0;
	for (int k = 0; k <= 2; ++k)
		rd = std::max(
		    {rd, difference_differential_residual(sys, Ta, 1, k, x),
		     difference_differential_residual(sys, Tb, 2, k, x)});
	add(rows, "kp", "difference-differential-link",
	    "shift/derivative compatibility", cfg.L, rd, 1e-6);
	return rows;
}

Rows suite_symmetry(const SuiteConfig &cfg)
{
	Rows rows;
	Xoshiro256 rng(cfg.seed);

	double rep = 0.0;
	for (int D = 2; D <= 3; ++D) {
		Eigen::MatrixXd A(D, D);
		for (int i = 0; i < D; ++i)
			for (int j = 0; j < D; ++j)
				A(i, j) = rng.uniform(-1.0, 1.0);
		Eigen::MatrixXd R1 =
		    Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
		for (int i = 0; i < D; ++i)
			for (int j = 0; j < D; ++j)
				A(i, j) = rng.uniform(-1.0, 1.0);
		Eigen::MatrixXd R2 =
		    Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
		IsometryAction a1 = make_isometry_action(R1, 4);
		IsometryAction a2 = make_isometry_action(R2, 4);
		IsometryAction a12 =
		    make_isometry_action(Eigen::MatrixXd(R1 * R2), 4);
		for (int k = 0; k < 4; ++k) {
			rep = std::max(rep, (a12.eta[k] -
			                     a1.eta[k] * a2.eta[k])
			                        .norm());
			Eigen::VectorXd m = multinomial_diagonal(D, k);
			rep = std::max(
			    rep, (a1.eta[k].transpose() *
			              m.asDiagonal().toDenseMatrix() *
			              a1.eta[k] -
			          m.asDiagonal().toDenseMatrix())
			             .norm());
		}
	}
	add(rows, "symmetry", "representation", "eq. varsigma", cfg.L, rep,
	    1e-10);

	PolynomialSystem sys = build_system(MeasureSpec::lebesgue_box(2),
	                                    FlowState::trivial(2), cfg.L,
	                                    cfg.B, cfg.quad_order > 0
	                                              ? cfg.quad_order
	                                              : default_quad(2));
	Eigen::MatrixXd Rs(2, 2), Rq(2, 2);
	Rs << 0, 1, 1, 0;
	Rq << 0, -1, 1, 0;
	IsometryAction sw = make_isometry_action(Rs, cfg.L + cfg.B);
	IsometryAction qt = make_isometry_action(Rq, cfg.L + cfg.B);
	add(rows, "symmetry", "swap-invariance", "pro13/pro14", cfg.L,
	    measure_invariance_residuals(sys, sw).max(), 1e-10);
	add(rows, "symmetry", "rotation-invariance", "pro13/pro14", cfg.L,
	    measure_invariance_residuals(sys, qt).max(), 1e-10);

	MeasureSpec tilted = MeasureSpec::lebesgue_box(2);
	tilted.kind = WeightKind::Callback;
	tilted.callback = [](const Eigen::VectorXd &v) {
		return std::exp(v[0]);
	};
	PolynomialSystem skew = build_system(
	    tilted, FlowState::trivial(2), cfg.L, cfg.B,
	    cfg.quad_order > 0 ? cfg.quad_order : default_quad(2));
	InvarianceResiduals bad = measure_invariance_residuals(skew, sw);
	add(rows, "symmetry", "negative-control", "invariance detector",
	    cfg.L, bad.max() > 1e-3 ? 0.0 : 1.0, 0.5);

	PolynomialSystem flowed = time_shifted_system(
	    sys, {{{2, 0}, 0.1}, {{2, 1}, 0.25}, {{2, 2}, 0.1}});
	add(rows, "symmetry", "invariant-times", "t eta_R = t", cfg.L,
	    measure_invariance_residuals(flowed, sw).max(), 1e-9);
	return rows;
}

} // namespace

const std::vector<std::string> &suite_names()
{
	static const std::vector<std::string> names{
	    "orthogonality", "quasidet", "three-term",    "cd",
	    "secondkind",    "darboux",  "christoffel",   "discrete-toda",
	    "lax",           "toda",     "miwa",          "kp",
	    "symmetry"};
	return names;
}

std::vector<ReportRow> run_suite(const std::string &name,
                                 const SuiteConfig &cfg)
{
	if (name == "orthogonality")
		return suite_orthogonality(cfg);
	if (name == "quasidet")
		return suite_quasidet(cfg);
	if (name == "three-term")
		return suite_three_term(cfg);
	if (name == "cd")
		return suite_cd(cfg);
	if (name == "secondkind")
		return suite_secondkind(cfg);
	if (name == "darboux")
		return suite_darboux(cfg);
	if (name == "christoffel")
		return suite_christoffel(cfg);
	if (name == "discrete-toda")
		return suite_discrete_toda(cfg);
	if (name == "lax")
		return suite_lax(cfg);
	if (name == "toda")
		return suite_toda(cfg);
	if (name == "miwa")
		return suite_miwa(cfg);
	if (name == "kp")
		return suite_kp(cfg);
	if (name == "symmetry")
		return suite_symmetry(cfg);
	throw ConfigError("unknown suite: " + name);
}

std::vector<ReportRow> run_suites(std::vector<std::string> names,
                                  const SuiteConfig &cfg)
{
	std::sort(names.begin(), names.end());
	names.erase(std::unique(names.begin(), names.end()), names.end());
	std::vector<ReportRow> rows;
	for (const auto &name : names) {
		std::vector<ReportRow> r = run_suite(name, cfg);
		rows.insert(rows.end(), r.begin(), r.end());
	}
	std::sort(rows.begin(), rows.end(),
	          [](const ReportRow &a, const ReportRow &b) {
		          return std::tie(a.suite, a.identity) <
		                 std::tie(b.suite, b.identity);
	          });
	return rows;
}

std::string report_json(const std::vector<ReportRow> &rows)
{
	nlohmann::ordered_json report;
	report["schema"] = "identity-report/1";
	report["rows"] = nlohmann::ordered_json::array();
	for (const auto &r : rows) {
		nlohmann::ordered_json row;
		row["suite"] = r.suite;
		row["identity"] = r.identity;
		row["paper_anchor"] = r.paper_anchor;
		row["levels"] = r.levels;
		row["residual"] = r.residual;
		row["tolerance"] = r.tolerance;
		row["pass"] = r.pass;
		row["millis"] = r.millis;
		report["rows"].push_back(row);
	}
	return report.dump(2) + "\n";
}

} // namespace mvopr
