#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace mvopr {

/** Exponent vector q = (a_1, ..., a_D) of a monomial x^q; all entries
 *  are non-negative and |q| = sum of entries is the total degree. */
using MultiIndex = std::vector<int>;

/** Total degree |q|. */
int degree(const MultiIndex &q);

/** All multi-indices of a fixed total degree, in the graded reverse
 *  lexicographic enumeration used throughout: within a level, q precedes
 *  q' when at the first coordinate where they differ q has the larger
 *  exponent (so x_1^k is first and x_D^k last). */
struct LevelBasis
{
	int D = 0;
	int k = 0;
	std::vector<MultiIndex> indices;

	int size() const { return static_cast<int>(indices.size()); }
};

/** Number of multi-indices of degree k in D variables: C(D+k-1, k).
 *  Throws OutOfRange on 64-bit overflow. */
std::int64_t level_size(int D, int k);

/** Enumerate level k in the canonical order (first exponent descending). */
LevelBasis enumerate_level(int D, int k);

/** Strict total order on same-degree indices: at the first differing
 *  coordinate the larger exponent comes first.  Indices of lower degree
 *  precede those of higher degree. */
bool mindex_less(const MultiIndex &a, const MultiIndex &b);

/** Position of q within its level's enumeration. */
int position_in_level(const LevelBasis &basis, const MultiIndex &q);

/** Flattened offset of level k inside the full stacked monomial vector:
 *  sum of level sizes below k. */
std::int64_t level_offset(int D, int k);

/** x^q for a point x in R^D. */
double monomial(const Eigen::VectorXd &x, const MultiIndex &q);

/** Vector of monomials chi_[k](x) = (x^{q_1}, ..., x^{q_{|[k]|}}). */
Eigen::VectorXd eval_chi_level(const LevelBasis &basis,
                               const Eigen::VectorXd &x);

/** Diagonal of the multinomial matrix at level k: entry i equals the
 *  multinomial coefficient k! / prod_a (alpha_{i,a}!). */
Eigen::VectorXd multinomial_diagonal(int D, int k);

} // namespace mvopr
