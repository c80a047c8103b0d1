#include "doctest.h"

#include "mvopr/errors.hpp"
#include "mvopr/rng.hpp"
#include "mvopr/shift.hpp"
#include "mvopr/symmetry.hpp"
#include "mvopr/toda.hpp"

#include <cmath>

using namespace mvopr;

namespace {

Eigen::MatrixXd random_orthogonal(int D, Xoshiro256 &rng)
{
	Eigen::MatrixXd A(D, D);
	for (int i = 0; i < D; ++i)
		for (int j = 0; j < D; ++j)
			A(i, j) = rng.uniform(-1.0, 1.0);
	return Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
}

Eigen::MatrixXd swap2()
{
	Eigen::MatrixXd R(2, 2);
	R << 0, 1, 1, 0;
	return R;
}

Eigen::MatrixXd quarter_turn()
{
	Eigen::MatrixXd R(2, 2);
	R << 0, -1, 1, 0;
	return R;
}

const PolynomialSystem &sym2d()
{
	static PolynomialSystem s = build_system(
	    MeasureSpec::lebesgue_box(2), FlowState::trivial(2), 4, 1, 24);
	return s;
}

} // namespace

TEST_SUITE("symmetry")
{

TEST_CASE("symmetric powers of isometries")
{
	// identity and first power
	Eigen::MatrixXd I2 = Eigen::MatrixXd::Identity(2, 2);
	CHECK((symmetric_power_matrix(I2, 3) -
	       Eigen::MatrixXd::Identity(4, 4))
	          .norm() < 1e-14);
	Xoshiro256 rng(11);
	Eigen::MatrixXd R = random_orthogonal(3, rng);
	CHECK((symmetric_power_matrix(R, 1) - R).norm() < 1e-14);
	CHECK(symmetric_power_matrix(R, 0)(0, 0) == doctest::Approx(1.0));

	// swap at level 2 is the 3x3 reversal permutation
	Eigen::MatrixXd P2 = symmetric_power_matrix(swap2(), 2);
	Eigen::MatrixXd rev(3, 3);
	rev << 0, 0, 1, 0, 1, 0, 1, 0, 0;
	CHECK((P2 - rev).norm() < 1e-14);

	Eigen::MatrixXd bad(2, 2);
	bad << 1, 1, 0, 1;
	CHECK_THROWS_AS(symmetric_power_matrix(bad, 2), NotOrthogonal);
	CHECK_THROWS_AS(make_isometry_action(bad, 3), NotOrthogonal);
}

TEST_CASE("eta is a representation preserving the multinomial metric")
{
	Xoshiro256 rng(23);
	for (int D = 2; D <= 3; ++D) {
		const int L = 5;
		Eigen::MatrixXd R1 = random_orthogonal(D, rng);
		Eigen::MatrixXd R2 = random_orthogonal(D, rng);
		IsometryAction a1 = make_isometry_action(R1, L);
		IsometryAction a2 = make_isometry_action(R2, L);
		IsometryAction a12 = make_isometry_action(
		    Eigen::MatrixXd(R1 * R2), L);
		IsometryAction ainv = make_isometry_action(
		    Eigen::MatrixXd(R1.transpose()), L);
		for (int k = 0; k < L; ++k) {
			const int sz = a1.eta[k].rows();
			Eigen::MatrixXd I =
			    Eigen::MatrixXd::Identity(sz, sz);
			CHECK((a12.eta[k] - a1.eta[k] * a2.eta[k]).norm() <
			      1e-10);
			CHECK((ainv.eta[k] * a1.eta[k] - I).norm() < 1e-10);
			// eta^{-1} = [R power]^T
			CHECK((a1.eta[k] * a1.power[k].transpose() - I)
			          .norm() < 1e-10);
			// metric preservation in both bases
			Eigen::VectorXd m = multinomial_diagonal(D, k);
			Eigen::MatrixXd Minv =
			    m.cwiseInverse().asDiagonal();
			CHECK((a1.power[k].transpose() * Minv *
			           a1.power[k] -
			       Minv)
			          .norm() < 1e-10);
			Eigen::MatrixXd M = m.asDiagonal();
			CHECK((a1.eta[k].transpose() * M * a1.eta[k] - M)
			          .norm() < 1e-10);
		}
	}

	// a permutation acts by permuting multi-indices
	IsometryAction sw = make_isometry_action(swap2(), 4);
	for (int k = 0; k < 4; ++k) {
		LevelBasis basis = enumerate_level(2, k);
		for (int i = 0; i < basis.size(); ++i) {
			MultiIndex q = basis.indices[i];
			std::swap(q[0], q[1]);
			int j = position_in_level(basis, q);
			CHECK(sw.eta[k](j, i) == doctest::Approx(1.0));
		}
		CHECK(sw.eta[k].sum() == doctest::Approx(basis.size()));
	}
}

TEST_CASE("monomial equivariance and shift conjugation")
{
	Xoshiro256 rng(5);
	for (int trial = 0; trial < 3; ++trial) {
		double th = rng.uniform(0.0, 6.28);
		Eigen::MatrixXd R(2, 2);
		R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
		IsometryAction act = make_isometry_action(R, 6);
		Eigen::VectorXd x(2);
		x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
		CHECK(chi_equivariance_residual(act, x) < 1e-11);
		Eigen::VectorXd n(2);
		n << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
		CHECK(shift_conjugation_residual(act, n) < 1e-10);
	}

	// right inverse of n.Lambda through an isometry sending e_a to n
	Eigen::VectorXd n(3);
	n << 0.2, -0.4, 0.6;
	n.normalize();
	const int a = 2;
	Eigen::VectorXd w = -n;
	w[a - 1] += 1.0; // w = e_a - n
	Eigen::MatrixXd R = Eigen::MatrixXd::Identity(3, 3) -
	                    2.0 / w.squaredNorm() * w * w.transpose();
	IsometryAction act = make_isometry_action(R, 5);
	CHECK((act.R.col(a - 1) - n).norm() < 1e-14);
	CHECK(right_inverse_residual(act, a) < 1e-10);
}

TEST_CASE("invariance residuals for symmetric measures")
{
	IsometryAction sw = make_isometry_action(swap2(), 5);
	InvarianceResiduals r = measure_invariance_residuals(sym2d(), sw);
	CHECK(r.moment < 1e-10);
	CHECK(r.S < 1e-10);
	CHECK(r.H < 1e-10);
	CHECK(r.beta < 1e-10);
	CHECK(r.P < 1e-10);
	CHECK(r.jacobi < 1e-10);
	CHECK(r.kernel < 1e-10);

	IsometryAction rot = make_isometry_action(quarter_turn(), 5);
	CHECK(measure_invariance_residuals(sym2d(), rot).max() < 1e-10);

	// an asymmetric weight is detected
	MeasureSpec tilted = MeasureSpec::lebesgue_box(2);
	tilted.kind = WeightKind::Callback;
	tilted.callback = [](const Eigen::VectorXd &x) {
		return std::exp(x[0]);
	};
	PolynomialSystem skew =
	    build_system(tilted, FlowState::trivial(2), 4, 1, 24);
	InvarianceResiduals bad = measure_invariance_residuals(skew, sw);
	CHECK(bad.P > 1e-3);
	CHECK(bad.moment > 1e-3);
}

TEST_CASE("invariant times preserve the symmetry")
{
	IsometryAction sw = make_isometry_action(swap2(), 5);

	std::vector<Eigen::VectorXd> t2(2);
	t2[0] = Eigen::VectorXd::Zero(2);
	t2[1] = Eigen::VectorXd(3);
	t2[1] << 0.1, 0.25, 0.1; // x1^2 and x2^2 share a coefficient
	TimeInvariance ok = invariant_time_check(sw, t2);
	CHECK(ok.invariant);
	CHECK(ok.defect < 1e-14);

	std::vector<Eigen::VectorXd> t1(1);
	t1[0] = Eigen::VectorXd(2);
	t1[0] << 0.3, 0.0; // swap moves t_1 to t_2
	CHECK_FALSE(invariant_time_check(sw, t1).invariant);

	CHECK(invariant_time_check(sw, {}).invariant);

	// flowing with an invariant time keeps the measure symmetric
	PolynomialSystem flowed = time_shifted_system(
	    sym2d(), {{{2, 0}, 0.1}, {{2, 1}, 0.25}, {{2, 2}, 0.1}});
	CHECK(measure_invariance_residuals(flowed, sw).max() < 1e-9);

	// flowing with a non-invariant time breaks it
	PolynomialSystem broken =
	    time_shifted_system(sym2d(), {{{1, 0}, 0.3}});
	CHECK(measure_invariance_residuals(broken, sw).P > 1e-3);
}

} // TEST_SUITE
