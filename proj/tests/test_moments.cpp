#include "doctest.h"

#include "mvopr/moments.hpp"
#include "mvopr/shift.hpp"

using namespace mvopr;

TEST_SUITE_BEGIN("moments");

TEST_CASE("closed-form moments of the Lebesgue square")
{
	MeasureSpec leb2 = MeasureSpec::lebesgue_box(2);
	QuadratureRule r = build_quadrature(leb2, 16);
	MomentMatrix M =
	    moment_matrix(leb2, FlowState::trivial(2), 3, 1, r);
	// block (0,0): integral of 1
	CHECK(M.G.block(0, 0)(0, 0) == doctest::Approx(4.0));
	// block (1,1): diag(4/3, 4/3)
	CHECK(M.G.block(1, 1)(0, 0) == doctest::Approx(4.0 / 3.0));
	CHECK(M.G.block(1, 1)(1, 1) == doctest::Approx(4.0 / 3.0));
	CHECK(std::abs(M.G.block(1, 1)(0, 1)) < 1e-15);
	// symmetry
	CHECK((M.G.dense() - M.G.dense().transpose()).norm() == 0.0);
}

TEST_CASE("1D moments 2/(i+j+1)")
{
	MeasureSpec leb1 = MeasureSpec::lebesgue_box(1);
	QuadratureRule r = build_quadrature(leb1, 32);
	MomentMatrix M =
	    moment_matrix(leb1, FlowState::trivial(1), 4, 2, r);
	for (int i = 0; i < 6; ++i)
		for (int j = 0; j < 6; ++j) {
			double want =
			    (i + j) % 2 == 0 ? 2.0 / (i + j + 1) : 0.0;
			CHECK(M.G.dense()(i, j) ==
			      doctest::Approx(want).epsilon(1e-13));
		}
}

TEST_CASE("moment symmetry under shifts")
{
	MeasureSpec leb2 = MeasureSpec::lebesgue_box(2);
	QuadratureRule r = build_quadrature(leb2, 24);
	MomentMatrix M =
	    moment_matrix(leb2, FlowState::trivial(2), 3, 2, r);
	const BlockStructure &s = M.G.structure();
	for (MultiIndex kvec : {MultiIndex{1, 0}, MultiIndex{0, 1},
	                        MultiIndex{1, 1}, MultiIndex{2, 0}}) {
		BlockMatrix lam =
		    lambda_power(s.D, M.total_levels(), kvec);
		Eigen::MatrixXd L = lam.dense() * M.G.dense();
		Eigen::MatrixXd R = M.G.dense() * lam.dense().transpose();
		// compare on the interior that both sides fill exactly
		int rows = s.offsets[M.total_levels() - degree(kvec)];
		CHECK((L - R).topLeftCorner(rows, rows).norm() <
		      1e-10 * M.G.dense().norm());
	}
}

TEST_CASE("discrete step matrix vs fresh quadrature")
{
	MeasureSpec leb2 = MeasureSpec::lebesgue_box(2);
	QuadratureRule r = build_quadrature(leb2, 32);
	FlowState st = FlowState::trivial(2);
	MomentMatrix M = moment_matrix(leb2, st, 3, 1, r);

	BlockMatrix stepped = discrete_step_matrix(M, st, 1);
	CHECK(stepped.block(0, 0)(0, 0) == doctest::Approx(8.0));

	MomentMatrix direct =
	    moment_matrix(leb2, st.stepped(1), 3, 0, r);
	CHECK((stepped.dense() - direct.G.dense()).norm() <
	      1e-11 * direct.G.dense().norm());
}

TEST_CASE("moment time derivative")
{
	MeasureSpec leb1 = MeasureSpec::lebesgue_box(1);
	QuadratureRule r = build_quadrature(leb1, 48);
	FlowState st = FlowState::trivial(1);
	st.resize_times(1, 2);
	MomentMatrix M = moment_matrix(leb1, st, 4, 2, r);

	// exact action: derivative w.r.t. t_1 shifts rows by one
	BlockMatrix dG = moment_time_derivative(M, {1});
	for (int i = 0; i < dG.dense().rows(); ++i)
		for (int j = 0; j < dG.dense().cols(); ++j)
			CHECK(dG.dense()(i, j) ==
			      doctest::Approx(M.G.dense()(i + 1, j)));

	// finite-difference cross-check
	const double h = 1e-4;
	MomentMatrix Gp =
	    moment_matrix(leb1, st.time_shifted(1, 0, h), 4, 2, r);
	MomentMatrix Gm =
	    moment_matrix(leb1, st.time_shifted(1, 0, -h), 4, 2, r);
	Eigen::MatrixXd fd =
	    (Gp.G.dense() - Gm.G.dense()) / (2 * h);
	int n = static_cast<int>(dG.dense().rows());
	CHECK((fd.topLeftCorner(n, n) - dG.dense()).norm() <
	      1e-7 * M.G.dense().norm());
}

TEST_SUITE_END();
