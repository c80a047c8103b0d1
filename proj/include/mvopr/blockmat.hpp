#pragma once

#include "mvopr/mindex.hpp"

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

namespace mvopr {

/** Relative spectral cutoff below which a pivot counts as singular. */
inline constexpr double kSingularCutoff = 1e-12;

/** Level partition of a square matrix truncated to L block rows/columns;
 *  block (k, l) has shape |[k]| x |[l]|. */
struct BlockStructure
{
	int D = 0;
	int L = 0;
	std::vector<int> sizes;   ///< |[k]| for k < L
	std::vector<int> offsets; ///< cumulative starts
	int total = 0;

	BlockStructure() = default;
	BlockStructure(int D_, int L_);
};

/** Dense level-partitioned square matrix. */
class BlockMatrix
{
public:
	BlockMatrix() = default;
	BlockMatrix(const BlockStructure &s)
	    : str_(s), data_(Eigen::MatrixXd::Zero(s.total, s.total))
	{}
	BlockMatrix(const BlockStructure &s, Eigen::MatrixXd m);

	const BlockStructure &structure() const { return str_; }
	int levels() const { return str_.L; }
	const Eigen::MatrixXd &dense() const { return data_; }
	Eigen::MatrixXd &dense() { return data_; }

	/** Block (k, l) as an Eigen view. */
	Eigen::Block<Eigen::MatrixXd> block(int k, int l);
	Eigen::Block<const Eigen::MatrixXd> block(int k, int l) const;

	/** Leading principal truncation keeping levels 0..l-1. */
	BlockMatrix truncation(int l) const;

private:
	BlockStructure str_;
	Eigen::MatrixXd data_;
};

/** Result of the block LDL-style factorization G = S^{-1} H S^{-T}:
 *  S is block lower unitriangular, H block diagonal symmetric (possibly
 *  indefinite), and beta[k] = S_(k,k-1). */
struct CholeskyFactors
{
	BlockMatrix S;
	BlockMatrix Sinv;
	std::vector<Eigen::MatrixXd> H;    ///< H[k], square |[k]|
	std::vector<Eigen::MatrixXd> beta; ///< beta[k] for k >= 1 (beta[0] empty)
};

/** Smallest/largest singular value ratio test. */
bool numerically_singular(const Eigen::MatrixXd &A);

/** Solve A X = B with a singularity guard on A; throws SingularPivot. */
Eigen::MatrixXd solve_guarded(const Eigen::MatrixXd &A,
                              const Eigen::MatrixXd &B);

/** Schur complement D - C A^{-1} B of a 2x2 partitioned matrix given its
 *  four blocks. */
Eigen::MatrixXd schur_complement(const Eigen::MatrixXd &A,
                                 const Eigen::MatrixXd &B,
                                 const Eigen::MatrixXd &C,
                                 const Eigen::MatrixXd &D);

/** Last quasi-determinant of a dense matrix partitioned so that the last
 *  block has last_rows rows and last_cols columns: the Schur complement
 *  with respect to the leading (all-but-last) block. */
Eigen::MatrixXd theta_star(const Eigen::MatrixXd &M, int last_rows,
                           int last_cols);

/** Last quasi-determinant of a level-partitioned matrix (last level is
 *  the boxed block). */
Eigen::MatrixXd last_quasi_determinant(const BlockMatrix &M);

/** Block LDL factorization by recursive Schur complements, level by
 *  level.  Requires a symmetric input; throws SingularTruncation(l) when
 *  the level-l pivot is numerically singular. */
CholeskyFactors block_ldl_factorize(const BlockMatrix &G);

/** Bordered truncation: levels 0..l-1 of G bordered below by block row k
 *  (columns 0..l).  Rows: |[0]|+...+|[l-1]| then |[k]|; columns up to
 *  level l inclusive. */
Eigen::MatrixXd bordered_truncation(const BlockMatrix &G, int k, int l);

/** Moore-Penrose pseudo-inverse (A^T A)^{-1} A^T for full column rank A;
 *  throws RankDeficient otherwise. */
Eigen::MatrixXd pseudo_inverse_full_column_rank(const Eigen::MatrixXd &A);

/** Text dump: D, L, then blocks in (k,l) order, row-major entries at 17
 *  significant digits. */
void dump_matrix(std::ostream &os, const BlockMatrix &M);

} // namespace mvopr
