#pragma once

#include "mvopr/blockmat.hpp"
#include "mvopr/mindex.hpp"

#include <Eigen/Dense>

namespace mvopr {

/** Degree-raising block (Lambda_a)_([k],[k+1]): entry (i,j) = 1 iff
 *  q_i + e_a = q_j.  Exactly one 1 per row. */
Eigen::MatrixXd shift_block(int D, int a, int k);

/** (n . Lambda)_([k],[k+1]) = sum_a n_a (Lambda_a)_([k],[k+1]). */
Eigen::MatrixXd dot_lambda_block(const Eigen::VectorXd &n, int k);

/** Full truncated n . Lambda on L levels (only the first superdiagonal of
 *  blocks is nonzero). */
BlockMatrix dot_lambda(int D, int L, const Eigen::VectorXd &n);

/** Truncation of Lambda_kvec = Lambda_1^{k_1} ... Lambda_D^{k_D}; only the
 *  |kvec|-th block superdiagonal is nonzero.  Throws OutOfRange when the
 *  truncation cannot hold it. */
BlockMatrix lambda_power(int D, int L, const MultiIndex &kvec);

/** Diagonal 0/1 projector Pi_{a,n} at level k: entry i = 1 iff the a-th
 *  exponent of q_i is at least n. */
Eigen::VectorXd projection_block(int D, int a, int n, int k);

/** Right inverse of (n . Lambda)_([k-1],[k]) built from the multinomial
 *  metric: M_k^{-1} B^T (B M_k^{-1} B^T)^{-1} with B the shift block. */
Eigen::MatrixXd right_inverse_dot_lambda(const Eigen::VectorXd &n, int k);

} // namespace mvopr
