#include "mvopr/shift.hpp"

#include "mvopr/errors.hpp"

#include <map>

namespace mvopr {

namespace {

/** Map each index of level k to its position, for O(log) lookup. */
std::map<MultiIndex, int> level_lookup(const LevelBasis &basis)
{
	std::map<MultiIndex, int> pos;
	for (int i = 0; i < basis.size(); ++i)
		pos[basis.indices[i]] = i;
	return pos;
}

} // namespace

Eigen::MatrixXd shift_block(int D, int a, int k)
{
	if (a < 1 || a > D)
		throw OutOfRange("shift_block: axis out of range");
	LevelBasis from = enumerate_level(D, k);
	LevelBasis to = enumerate_level(D, k + 1);
	auto pos = level_lookup(to);
	Eigen::MatrixXd B = Eigen::MatrixXd::Zero(from.size(), to.size());
	for (int i = 0; i < from.size(); ++i) {
		MultiIndex q = from.indices[i];
		q[a - 1] += 1;
		B(i, pos.at(q)) = 1.0;
	}
	return B;
}

Eigen::MatrixXd dot_lambda_block(const Eigen::VectorXd &n, int k)
{
	const int D = static_cast<int>(n.size());
	Eigen::MatrixXd B = Eigen::MatrixXd::Zero(level_size(D, k),
	                                          level_size(D, k + 1));
	for (int a = 1; a <= D; ++a)
		if (n[a - 1] != 0.0)
			B += n[a - 1] * shift_block(D, a, k);
	return B;
}

BlockMatrix dot_lambda(int D, int L, const Eigen::VectorXd &n)
{
	BlockMatrix M{BlockStructure(D, L)};
	for (int k = 0; k + 1 < L; ++k)
		M.block(k, k + 1) = dot_lambda_block(n, k);
	return M;
}

BlockMatrix lambda_power(int D, int L, const MultiIndex &kvec)
{
	const int d = degree(kvec);
	if (L < d + 1)
		throw OutOfRange("lambda_power: truncation too small");
	BlockMatrix M{BlockStructure(D, L)};
	for (int k = 0; k + d < L; ++k) {
		LevelBasis from = enumerate_level(D, k);
		LevelBasis to = enumerate_level(D, k + d);
		auto pos = level_lookup(to);
		auto blk = M.block(k, k + d);
		for (int i = 0; i < from.size(); ++i) {
			MultiIndex q = from.indices[i];
			for (int a = 0; a < D; ++a)
				q[a] += kvec[a];
			blk(i, pos.at(q)) = 1.0;
		}
	}
	if (d == 0)
		for (int k = 0; k < L; ++k)
			M.block(k, k).setIdentity();
	return M;
}

Eigen::VectorXd projection_block(int D, int a, int n, int k)
{
	if (a < 1 || a > D || n < 1)
		throw OutOfRange("projection_block: bad axis or power");
	LevelBasis basis = enumerate_level(D, k);
	Eigen::VectorXd d(basis.size());
	for (int i = 0; i < basis.size(); ++i)
		d[i] = basis.indices[i][a - 1] >= n ? 1.0 : 0.0;
	return d;
}

Eigen::MatrixXd right_inverse_dot_lambda(const Eigen::VectorXd &n, int k)
{
	if (k < 1)
		throw OutOfRange("right_inverse_dot_lambda: need k >= 1");
	if (n.norm() == 0.0)
		throw RankDeficient("right_inverse_dot_lambda: zero direction");
	const int D = static_cast<int>(n.size());
	Eigen::MatrixXd B = dot_lambda_block(n, k - 1); // |[k-1]| x |[k]|
	Eigen::VectorXd Minv =
	    multinomial_diagonal(D, k).cwiseInverse();
	Eigen::MatrixXd BMBt = B * Minv.asDiagonal() * B.transpose();
	if (numerically_singular(BMBt))
		throw RankDeficient("right_inverse_dot_lambda: singular core");
	return Minv.asDiagonal() * B.transpose() *
	       BMBt.partialPivLu().inverse();
}

} // namespace mvopr
