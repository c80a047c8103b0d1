#include "doctest.h"

#include "mvopr/errors.hpp"
#include "mvopr/shift.hpp"
#include "mvopr/toda.hpp"

#include <cmath>

using namespace mvopr;

namespace {

const PolynomialSystem &sys1d()
{
	static PolynomialSystem s = build_system(
	    MeasureSpec::lebesgue_box(1), FlowState::trivial(1), 4, 2, 32);
	return s;
}

const PolynomialSystem &sys2d()
{
	static PolynomialSystem s = build_system(
	    MeasureSpec::lebesgue_box(2), FlowState::trivial(2), 4, 1, 24);
	return s;
}

} // namespace

TEST_SUITE("toda")
{

TEST_CASE("time bookkeeping and shifted rebuilds")
{
	TimeIndex t = time_index(2, {1, 0});
	CHECK(t.level == 1);
	CHECK(t.pos == 0);
	t = time_index(2, {0, 2});
	CHECK(t.level == 2);
	CHECK(t.pos == 2);
	t = time_index(2, {1, 1});
	CHECK(t.level == 2);
	CHECK(t.pos == 1);
	CHECK_THROWS_AS(time_index(2, {0, 0}), OutOfRange);

	// A zero shift reproduces the system exactly.
	PolynomialSystem same =
	    time_shifted_system(sys1d(), {{{1, 0}, 0.0}});
	CHECK((same.H(2) - sys1d().H(2)).norm() == doctest::Approx(0.0));

	// A genuine shift changes the moments.
	PolynomialSystem moved =
	    time_shifted_system(sys1d(), {{{1, 0}, 0.1}});
	CHECK((moved.H(0) - sys1d().H(0)).norm() > 1e-4);
}

TEST_CASE("first moments as exact time derivatives of H_[0]")
{
	// d H_[0] / d t_q = integral of x^q over [-1, 1]:
	// zero for odd exponents, 2/3 for q = (2).
	Eigen::MatrixXd d1 = factor_time_derivative(sys1d(), Factor::H, 0,
	                                            {{1, 0}});
	CHECK(std::abs(d1(0, 0)) < 1e-10);
	Eigen::MatrixXd d2 = factor_time_derivative(sys1d(), Factor::H, 0,
	                                            {{2, 0}});
	CHECK(d2(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-7));

	// 2D: d H_[0] / d t_{(1,1)} = integral of x1 x2 = 0,
	//     d H_[0] / d t_{(2,0)} = (2/3) * 2 = 4/3.
	Eigen::MatrixXd m11 = factor_time_derivative(sys2d(), Factor::H, 0,
	                                             {time_index(2, {1, 1})});
	CHECK(std::abs(m11(0, 0)) < 1e-9);
	Eigen::MatrixXd m20 = factor_time_derivative(sys2d(), Factor::H, 0,
	                                             {time_index(2, {2, 0})});
	CHECK(m20(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("Richardson extrapolation converges at second order")
{
	FdConfig plain;
	plain.richardson = false;
	FdConfig rich;
	Eigen::MatrixXd ref = factor_time_derivative(
	    sys1d(), Factor::Beta, 2, {{1, 0}}, rich);
	plain.h1 = 2e-3;
	Eigen::MatrixXd coarse = factor_time_derivative(
	    sys1d(), Factor::Beta, 2, {{1, 0}}, plain);
	plain.h1 = 1e-3;
	Eigen::MatrixXd fine = factor_time_derivative(
	    sys1d(), Factor::Beta, 2, {{1, 0}}, plain);
	double ratio = (coarse - ref).norm() / (fine - ref).norm();
	CHECK(ratio > 3.5);
	CHECK(ratio < 4.5);
}

TEST_CASE("continuous Lax relations")
{
	LaxResiduals r = lax_residuals(sys1d(), 1);
	CHECK(r.dS < 1e-6);
	CHECK(r.dH < 1e-6);
	CHECK(r.dBeta < 1e-6);
	for (int a = 1; a <= 2; ++a) {
		LaxResiduals q = lax_residuals(sys2d(), a);
		CHECK(q.dS < 1e-6);
		CHECK(q.dH < 1e-6);
		CHECK(q.dBeta < 1e-6);
	}
}

TEST_CASE("Toda equation for the quasi-tau blocks")
{
	for (int k = 0; k <= 3; ++k)
		CHECK(toda_equation_residual(sys1d(), 1, 1, k) < 1e-5);
	for (int k = 0; k <= 2; ++k) {
		CHECK(toda_equation_residual(sys2d(), 1, 2, k) < 1e-5);
		CHECK(toda_equation_residual(sys2d(), 2, 1, k) < 1e-5);
		CHECK(toda_equation_residual(sys2d(), 1, 1, k) < 1e-5);
	}
}

TEST_CASE("Toda equation in beta form")
{
	for (int k = 1; k <= 3; ++k)
		CHECK(toda_beta_equation_residual(sys1d(), 1, 1, k) < 1e-5);
	for (int k = 1; k <= 2; ++k) {
		CHECK(toda_beta_equation_residual(sys2d(), 1, 2, k) < 1e-5);
		CHECK(toda_beta_equation_residual(sys2d(), 2, 1, k) < 1e-5);
	}
}

TEST_CASE("mixed differential-difference Toda equations")
{
	PolynomialSystem T1 = stepped_system(sys1d(), 1);
	for (int k = 1; k <= 3; ++k) {
		auto [r1, r2] = toda_mixed_residuals(sys1d(), T1, 1, 1, k);
		CHECK(r1 < 1e-6);
		CHECK(r2 < 1e-6);
	}
	PolynomialSystem T2 = stepped_system(sys2d(), 2);
	for (int k = 1; k <= 2; ++k) {
		auto [r1, r2] = toda_mixed_residuals(sys2d(), T2, 1, 2, k);
		CHECK(r1 < 1e-6);
		CHECK(r2 < 1e-6);
	}
}

TEST_CASE("beta recurrence from quasi-tau derivatives")
{
	for (int k = 0; k <= 3; ++k) {
		auto [one, chain] = beta_tau_chain(sys1d(), k);
		CHECK(one < 1e-6);
		CHECK(chain < 1e-6);
	}
	for (int k = 0; k <= 2; ++k) {
		auto [one, chain] = beta_tau_chain(sys2d(), k);
		CHECK(one < 1e-6);
		CHECK(chain < 1e-6);
	}
}

TEST_CASE("coherent shift vectors")
{
	// 1D: block k is 1 / (k q^k).
	Eigen::VectorXd n1(1);
	n1 << 1.0;
	auto blocks = miwa_shift_vector(n1, 2.0, 4);
	REQUIRE(blocks.size() == 4);
	for (int k = 1; k <= 4; ++k) {
		CHECK(blocks[k - 1].size() == 1);
		CHECK(blocks[k - 1](0) ==
		      doctest::Approx(1.0 / (k * std::pow(2.0, k)))
		          .epsilon(1e-14));
	}

	// 2D, n = (1,1), q = 2, level 2: (1/8, 1/4, 1/8) over
	// (x1^2, x1 x2, x2^2).
	Eigen::VectorXd n2(2);
	n2 << 1.0, 1.0;
	auto blocks2 = miwa_shift_vector(n2, 2.0, 2);
	REQUIRE(blocks2[1].size() == 3);
	CHECK(blocks2[1](0) == doctest::Approx(0.125).epsilon(1e-14));
	CHECK(blocks2[1](1) == doctest::Approx(0.25).epsilon(1e-14));
	CHECK(blocks2[1](2) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("coherent shift approximates the elementary factor")
{
	Eigen::VectorXd n1(1);
	n1 << 1.0;
	MeasureSpec leb1 = MeasureSpec::lebesgue_box(1);
	double dev8 = miwa_consistency_check(leb1, n1, 3.0, 8, 3, 1, 32);
	CHECK(dev8 < 1e-3);
	CHECK(dev8 > 1e-12); // truncation error is genuine
	double dev4 = miwa_consistency_check(leb1, n1, 3.0, 4, 3, 1, 32);
	CHECK(dev8 < dev4);
	CHECK_THROWS_AS(miwa_consistency_check(leb1, n1, 0.5, 4, 3, 1, 32),
	                ValidityRegion);

	Eigen::VectorXd n2(2);
	n2 << 1.0, 1.0;
	MeasureSpec leb2 = MeasureSpec::lebesgue_box(2);
	CHECK(miwa_consistency_check(leb2, n2, 6.0, 8, 3, 1, 24) < 1e-3);
}

TEST_CASE("fixed-site compatibility on a lattice patch")
{
	PolynomialSystem Ta = stepped_system(sys2d(), 1);
	PolynomialSystem Tb = stepped_system(sys2d(), 2);
	PolynomialSystem Tab = stepped_system(Ta, 2);
	for (int k = 1; k <= 3; ++k)
		CHECK(kp_teo3_residual(sys2d(), Ta, Tb, Tab, 1, 2, k) < 1e-5);
}

TEST_CASE("second-order linear flow equation")
{
	Eigen::VectorXd x(2);
	x << 0.3, -0.4;
	for (int k = 1; k <= 2; ++k) {
		CHECK(schrodinger_residual(sys2d(), 1, 2, k, x) < 1e-5);
		CHECK(schrodinger_residual(sys2d(), 1, 1, k, x) < 1e-5);
	}
	Eigen::VectorXd y(1);
	y << 0.7;
	for (int k = 1; k <= 3; ++k)
		CHECK(schrodinger_residual(sys1d(), 1, 1, k, y) < 1e-5);
}

TEST_CASE("third-order linear flow equation")
{
	Eigen::VectorXd x(2);
	x << 0.3, -0.4;
	for (int k = 1; k <= 2; ++k) {
		CHECK(third_order_residual(sys2d(), 1, 2, 2, k, x) < 1e-4);
		CHECK(third_order_residual(sys2d(), 1, 1, 2, k, x) < 1e-4);
	}
	Eigen::VectorXd y(1);
	y << 0.7;
	CHECK(third_order_residual(sys1d(), 1, 1, 1, 2, y) < 1e-4);
}

TEST_CASE("two-variable fourth-order beta equation")
{
	for (int k = 1; k <= 2; ++k)
		CHECK(teo4_residual(sys2d(), 1, 2, k) < 1e-4);
}

TEST_CASE("coupling of the first two subdiagonals")
{
	CHECK(beta2_system_residual(sys2d(), 1, 2, 2) < 1e-4);
	for (int k = 2; k <= 3; ++k)
		CHECK(beta2_system_residual(sys1d(), 1, 1, k) < 1e-4);

	// the same equation away from the symmetric base point
	PolynomialSystem moved = time_shifted_system(
	    sys2d(), {{{1, 0}, 0.2}, {{1, 1}, -0.1}, {{2, 0}, 0.15},
	              {{2, 1}, 0.1}, {{2, 2}, -0.05}});
	CHECK(beta2_system_residual(moved, 1, 2, 2) < 1e-4);

	// d beta2_[k] / d t_a = (d beta_[k] / d t_a) beta_[k-1]
	Eigen::MatrixXd db2 = factor_time_derivative(sys1d(), Factor::Beta2,
	                                             2, {{1, 0}});
	Eigen::MatrixXd db = factor_time_derivative(sys1d(), Factor::Beta, 2,
	                                            {{1, 0}});
	CHECK((db2 - db * sys1d().beta(1)).norm() < 1e-7);
}

TEST_CASE("difference-differential link for the polynomials")
{
	PolynomialSystem T1 = stepped_system(sys1d(), 1);
	Eigen::VectorXd y(1);
	y << 0.7;
	for (int k = 0; k <= 3; ++k)
		CHECK(difference_differential_residual(sys1d(), T1, 1, k, y) <
		      1e-6);

	PolynomialSystem Ta = stepped_system(sys2d(), 1);
	PolynomialSystem Tb = stepped_system(sys2d(), 2);
	Eigen::VectorXd x(2);
	x << 0.3, -0.4;
	for (int k = 0; k <= 2; ++k) {
		CHECK(difference_differential_residual(sys2d(), Ta, 1, k, x) <
		      1e-6);
		CHECK(difference_differential_residual(sys2d(), Tb, 2, k, x) <
		      1e-6);
	}
}

} // TEST_SUITE
