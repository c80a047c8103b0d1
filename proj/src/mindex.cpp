#include "mvopr/mindex.hpp"

#include "mvopr/errors.hpp"

#include <cmath>
#include <numeric>

namespace mvopr {

int degree(const MultiIndex &q)
{
	return std::accumulate(q.begin(), q.end(), 0);
}

std::int64_t level_size(int D, int k)
{
	if (D < 1 || k < 0)
		throw OutOfRange("level_size: need D >= 1, k >= 0");
	// C(D+k-1, k) via incremental products with overflow guard
	std::int64_t r = 1;
	for (int j = 1; j <= k; ++j) {
		std::int64_t num = D - 1 + j;
		if (r > ((std::int64_t)1 << 62) / num)
			throw OutOfRange("level_size: binomial overflow");
		r = r * num / j; // exact: r*num divisible by j at each step
	}
	return r;
}

namespace {

void enumerate_rec(int D, int k, MultiIndex &cur, int pos,
                   std::vector<MultiIndex> &out)
{
	if (pos == D - 1) {
		cur[pos] = k;
		out.push_back(cur);
		return;
	}
	// first coordinate descending gives the canonical order
	for (int a = k; a >= 0; --a) {
		cur[pos] = a;
		enumerate_rec(D, k - a, cur, pos + 1, out);
	}
	cur[pos] = 0;
}

} // namespace

LevelBasis enumerate_level(int D, int k)
{
	if (D < 1 || k < 0)
		throw OutOfRange("enumerate_level: need D >= 1, k >= 0");
	LevelBasis basis;
	basis.D = D;
	basis.k = k;
	MultiIndex cur(D, 0);
	enumerate_rec(D, k, cur, 0, basis.indices);
	return basis;
}

bool mindex_less(const MultiIndex &a, const MultiIndex &b)
{
	int da = degree(a), db = degree(b);
	if (da != db)
		return da < db;
	for (size_t p = 0; p < a.size(); ++p)
		if (a[p] != b[p])
			return a[p] > b[p];
	return false;
}

int position_in_level(const LevelBasis &basis, const MultiIndex &q)
{
	for (int i = 0; i < basis.size(); ++i)
		if (basis.indices[i] == q)
			return i;
	throw OutOfRange("position_in_level: index not in level");
}

std::int64_t level_offset(int D, int k)
{
	std::int64_t off = 0;
	for (int j = 0; j < k; ++j)
		off += level_size(D, j);
	return off;
}

double monomial(const Eigen::VectorXd &x, const MultiIndex &q)
{
	double v = 1.0;
	for (size_t a = 0; a < q.size(); ++a)
		for (int p = 0; p < q[a]; ++p)
			v *= x[static_cast<Eigen::Index>(a)];
	return v;
}

Eigen::VectorXd eval_chi_level(const LevelBasis &basis,
                               const Eigen::VectorXd &x)
{
	Eigen::VectorXd v(basis.size());
	for (int i = 0; i < basis.size(); ++i)
		v[i] = monomial(x, basis.indices[i]);
	return v;
}

Eigen::VectorXd multinomial_diagonal(int D, int k)
{
	LevelBasis basis = enumerate_level(D, k);
	Eigen::VectorXd d(basis.size());
	for (int i = 0; i < basis.size(); ++i) {
		// k! / prod alpha_a! computed as a product of binomials to
		// stay in exact integer range for desk-scale k
		std::int64_t c = 1;
		int rem = k;
		for (int a = 0; a < D; ++a) {
			int alpha = basis.indices[i][a];
			// multiply by C(rem, alpha)
			std::int64_t b = 1;
			for (int j = 1; j <= alpha; ++j)
				b = b * (rem - alpha + j) / j;
			c *= b;
			rem -= alpha;
		}
		d[i] = static_cast<double>(c);
	}
	return d;
}

} // namespace mvopr
