#include "mvopr/blockmat.hpp"

#include "mvopr/errors.hpp"

#include <Eigen/SVD>
#include <iomanip>
#include <ostream>

namespace mvopr {

BlockStructure::BlockStructure(int D_, int L_) : D(D_), L(L_)
{
	sizes.resize(L);
	offsets.resize(L);
	int off = 0;
	for (int k = 0; k < L; ++k) {
		offsets[k] = off;
		sizes[k] = static_cast<int>(level_size(D, k));
		off += sizes[k];
	}
	total = off;
}

BlockMatrix::BlockMatrix(const BlockStructure &s, Eigen::MatrixXd m)
    : str_(s), data_(std::move(m))
{
	if (data_.rows() != str_.total || data_.cols() != str_.total)
		throw OutOfRange("BlockMatrix: dense size mismatch");
}

Eigen::Block<Eigen::MatrixXd> BlockMatrix::block(int k, int l)
{
	if (k < 0 || k >= str_.L || l < 0 || l >= str_.L)
		throw OutOfRange("BlockMatrix::block: level out of range");
	return data_.block(str_.offsets[k], str_.offsets[l], str_.sizes[k],
	                   str_.sizes[l]);
}

Eigen::Block<const Eigen::MatrixXd> BlockMatrix::block(int k, int l) const
{
	if (k < 0 || k >= str_.L || l < 0 || l >= str_.L)
		throw OutOfRange("BlockMatrix::block: level out of range");
	return data_.block(str_.offsets[k], str_.offsets[l], str_.sizes[k],
	                   str_.sizes[l]);
}

BlockMatrix BlockMatrix::truncation(int l) const
{
	if (l < 1 || l > str_.L)
		throw OutOfRange("BlockMatrix::truncation: bad level count");
	BlockStructure s(str_.D, l);
	return BlockMatrix(s, data_.topLeftCorner(s.total, s.total));
}

bool numerically_singular(const Eigen::MatrixXd &A)
{
	if (A.rows() == 0)
		return false;
	Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
	const auto &sv = svd.singularValues();
	if (!(sv(0) > 0.0))
		return true;
	return sv(sv.size() - 1) < kSingularCutoff * sv(0);
}

Eigen::MatrixXd solve_guarded(const Eigen::MatrixXd &A,
                              const Eigen::MatrixXd &B)
{
	if (A.rows() != A.cols())
		throw OutOfRange("solve_guarded: pivot must be square");
	if (numerically_singular(A))
		throw SingularPivot("solve_guarded: singular pivot");
	return A.partialPivLu().solve(B);
}

Eigen::MatrixXd schur_complement(const Eigen::MatrixXd &A,
                                 const Eigen::MatrixXd &B,
                                 const Eigen::MatrixXd &C,
                                 const Eigen::MatrixXd &D)
{
	return D - C * solve_guarded(A, B);
}

Eigen::MatrixXd theta_star(const Eigen::MatrixXd &M, int last_rows,
                           int last_cols)
{
	const int pr = static_cast<int>(M.rows()) - last_rows;
	const int pc = static_cast<int>(M.cols()) - last_cols;
	if (pr != pc)
		throw OutOfRange("theta_star: leading block must be square");
	if (pr < 0)
		throw OutOfRange("theta_star: last block larger than matrix");
	if (pr == 0)
		return M;
	return schur_complement(M.topLeftCorner(pr, pr),
	                        M.topRightCorner(pr, last_cols),
	                        M.bottomLeftCorner(last_rows, pr),
	                        M.bottomRightCorner(last_rows, last_cols));
}

Eigen::MatrixXd last_quasi_determinant(const BlockMatrix &M)
{
	const int last = M.structure().sizes.back();
	return theta_star(M.dense(), last, last);
}

CholeskyFactors block_ldl_factorize(const BlockMatrix &G)
{
	const BlockStructure &s = G.structure();
	const int L = s.L;
	CholeskyFactors F;
	F.Sinv = BlockMatrix(s);
	F.H.resize(L);

	// Recursive Schur elimination: A starts as G; after step k its
	// trailing part holds the Schur complement of the leading k+1 levels.
	Eigen::MatrixXd A = G.dense();
	BlockMatrix &Sinv = F.Sinv;
	for (int k = 0; k < L; ++k) {
		Eigen::MatrixXd Hk =
		    A.block(s.offsets[k], s.offsets[k], s.sizes[k], s.sizes[k]);
		Hk = 0.5 * (Hk + Hk.transpose().eval()); // keep exact symmetry
		if (numerically_singular(Hk))
			throw SingularTruncation(k);
		F.H[k] = Hk;
		Sinv.block(k, k).setIdentity();
		Eigen::PartialPivLU<Eigen::MatrixXd> lu(Hk);
		for (int i = k + 1; i < L; ++i) {
			Eigen::MatrixXd Aik = A.block(
			    s.offsets[i], s.offsets[k], s.sizes[i], s.sizes[k]);
			// (S^{-1})_(i,k) = A_(i,k) H_k^{-1}
			Sinv.block(i, k) = lu.solve(Aik.transpose()).transpose();
		}
		// rank-one-level update of the trailing Schur complement
		for (int i = k + 1; i < L; ++i)
			for (int j = k + 1; j < L; ++j)
				A.block(s.offsets[i], s.offsets[j], s.sizes[i],
				        s.sizes[j]) -=
				    Sinv.block(i, k) *
				    A.block(s.offsets[k], s.offsets[j], s.sizes[k],
				            s.sizes[j]);
	}

	// S = (S^{-1})^{-1} by block forward substitution.
	F.S = BlockMatrix(s);
	for (int k = 0; k < L; ++k) {
		F.S.block(k, k).setIdentity();
		for (int l = k - 1; l >= 0; --l) {
			Eigen::MatrixXd acc =
			    Eigen::MatrixXd::Zero(s.sizes[k], s.sizes[l]);
			for (int j = l; j < k; ++j)
				acc += Sinv.block(k, j) * F.S.block(j, l);
			F.S.block(k, l) = -acc;
		}
	}

	F.beta.resize(L);
	for (int k = 1; k < L; ++k)
		F.beta[k] = F.S.block(k, k - 1);
	return F;
}

Eigen::MatrixXd bordered_truncation(const BlockMatrix &G, int k, int l)
{
	const BlockStructure &s = G.structure();
	if (k >= s.L || l >= s.L || k < 0 || l < 0)
		throw OutOfRange("bordered_truncation: level out of range");
	const int lead_rows = s.offsets[l];              // levels 0..l-1
	const int cols = s.offsets[l] + s.sizes[l];      // levels 0..l
	Eigen::MatrixXd M(lead_rows + s.sizes[k], cols);
	M.topRows(lead_rows) = G.dense().topLeftCorner(lead_rows, cols);
	M.bottomRows(s.sizes[k]) =
	    G.dense().block(s.offsets[k], 0, s.sizes[k], cols);
	return M;
}

Eigen::MatrixXd pseudo_inverse_full_column_rank(const Eigen::MatrixXd &A)
{
	Eigen::MatrixXd corr = A.transpose() * A;
	if (numerically_singular(corr))
		throw RankDeficient("pseudo_inverse: correlation matrix singular");
	return corr.ldlt().solve(A.transpose());
}

void dump_matrix(std::ostream &os, const BlockMatrix &M)
{
	const BlockStructure &s = M.structure();
	os << "D " << s.D << "\nL " << s.L << "\n";
	os << std::setprecision(17);
	for (int k = 0; k < s.L; ++k)
		for (int l = 0; l < s.L; ++l) {
			os << "block " << k << " " << l << "\n";
			auto b = M.block(k, l);
			for (int i = 0; i < b.rows(); ++i) {
				for (int j = 0; j < b.cols(); ++j)
					os << (j ? " " : "") << b(i, j);
				os << "\n";
			}
		}
}

} // namespace mvopr
