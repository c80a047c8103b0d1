#include "doctest.h"

#include "mvopr/mindex.hpp"
#include "mvopr/rng.hpp"

#include <cmath>

using namespace mvopr;

TEST_SUITE_BEGIN("mindex");

TEST_CASE("enumeration order and sizes")
{
	auto b22 = enumerate_level(2, 2);
	REQUIRE(b22.size() == 3);
	CHECK(b22.indices[0] == MultiIndex{2, 0});
	CHECK(b22.indices[1] == MultiIndex{1, 1});
	CHECK(b22.indices[2] == MultiIndex{0, 2});

	auto b30 = enumerate_level(3, 0);
	REQUIRE(b30.size() == 1);
	CHECK(b30.indices[0] == MultiIndex{0, 0, 0});

	auto b31 = enumerate_level(3, 1);
	REQUIRE(b31.size() == 3);
	CHECK(b31.indices[0] == MultiIndex{1, 0, 0});
	CHECK(b31.indices[1] == MultiIndex{0, 1, 0});
	CHECK(b31.indices[2] == MultiIndex{0, 0, 1});

	CHECK(level_size(2, 2) == 3);
	CHECK(level_size(5, 0) == 1);
	CHECK(level_size(3, 4) == 15);

	// brute-force size oracle
	for (int D = 1; D <= 5; ++D)
		for (int k = 0; k <= 10; ++k)
			CHECK(level_size(D, k) ==
			      (std::int64_t)enumerate_level(D, k).size());
}

TEST_CASE("strict total order matches enumeration")
{
	for (int D = 1; D <= 4; ++D)
		for (int k = 0; k <= 5; ++k) {
			auto b = enumerate_level(D, k);
			for (int i = 0; i < b.size(); ++i)
				for (int j = 0; j < b.size(); ++j) {
					bool lt = mindex_less(b.indices[i],
					                      b.indices[j]);
					CHECK(lt == (i < j));
				}
		}
	// levels are graded
	CHECK(mindex_less(MultiIndex{0, 2}, MultiIndex{3, 0}));
	CHECK_FALSE(mindex_less(MultiIndex{3, 0}, MultiIndex{0, 2}));
}

TEST_CASE("monomial evaluation")
{
	auto b = enumerate_level(2, 2);
	Eigen::VectorXd x(2);
	x << 2, 3;
	Eigen::VectorXd v = eval_chi_level(b, x);
	CHECK(v(0) == 4);
	CHECK(v(1) == 6);
	CHECK(v(2) == 9);

	auto b0 = enumerate_level(3, 0);
	Eigen::VectorXd y(3);
	y << -1, 5, 0.25;
	CHECK(eval_chi_level(b0, y)(0) == 1.0);

	auto b1 = enumerate_level(2, 1);
	CHECK(eval_chi_level(b1, x)(0) == 2);
	CHECK(eval_chi_level(b1, x)(1) == 3);
}

TEST_CASE("multinomial diagonal")
{
	Eigen::VectorXd d = multinomial_diagonal(2, 2);
	CHECK(d(0) == 1);
	CHECK(d(1) == 2);
	CHECK(d(2) == 1);

	CHECK(multinomial_diagonal(3, 1).isOnes());

	Eigen::VectorXd d3 = multinomial_diagonal(2, 3);
	CHECK(d3(0) == 1);
	CHECK(d3(1) == 3);
	CHECK(d3(2) == 3);
	CHECK(d3(3) == 1);
}

TEST_CASE("multinomial theorem at random points")
{
	Xoshiro256 rng(17);
	for (int D = 1; D <= 4; ++D) {
		Eigen::VectorXd x(D);
		for (int a = 0; a < D; ++a)
			x[a] = rng.uniform(-1.0, 1.0);
		double s = x.sum();
		for (int k = 0; k <= 8; ++k) {
			auto b = enumerate_level(D, k);
			double lhs = multinomial_diagonal(D, k).dot(
			    eval_chi_level(b, x));
			double rhs = std::pow(s, k);
			CHECK(std::abs(lhs - rhs) <=
			      1e-12 * std::max(1.0, std::abs(rhs)));
		}
	}
}

TEST_CASE("level offsets")
{
	CHECK(level_offset(2, 0) == 0);
	CHECK(level_offset(2, 3) == 1 + 2 + 3);
	CHECK(level_offset(3, 2) == 1 + 3);
}

TEST_SUITE_END();
