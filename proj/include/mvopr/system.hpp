#pragma once

#include "mvopr/moments.hpp"

namespace mvopr {

/** A fully constructed orthogonal-polynomial system: measure, flow state,
 *  quadrature, moment matrix and its block factorization. */
struct PolynomialSystem
{
	MeasureSpec spec;
	FlowState state;
	int L = 0; ///< usable levels
	int B = 0; ///< buffer levels
	QuadratureRule rule;
	MomentMatrix M;
	CholeskyFactors F;

	int total_levels() const { return L + B; }
	const BlockStructure &structure() const { return M.G.structure(); }
	const Eigen::MatrixXd &H(int k) const { return F.H[k]; }
	const Eigen::MatrixXd &beta(int k) const { return F.beta[k]; }
};

/** Build a system from scratch: quadrature, moments, factorization. */
PolynomialSystem build_system(const MeasureSpec &spec,
                              const FlowState &state, int L, int B,
                              int quad_order);

/** Same measure after the discrete step T_a (fresh quadrature of the
 *  stepped measure). */
PolynomialSystem stepped_system(const PolynomialSystem &sys, int a,
                                int delta = 1);

/** P_[k](x) = sum_{l<=k} S_(k,l) chi_[l](x). */
Eigen::VectorXd eval_P(const PolynomialSystem &sys, int k,
                       const Eigen::VectorXd &x);

/** Stacked (P_[0](x), ..., P_[l-1](x)). */
Eigen::VectorXd eval_P_stack(const PolynomialSystem &sys, int l,
                             const Eigen::VectorXd &x);

/** Same polynomial through the bordered-truncation Schur complement of
 *  the moment matrix. */
Eigen::VectorXd eval_P_quasideterminant(const PolynomialSystem &sys, int l,
                                        const Eigen::VectorXd &x);

/** Dressed shift operator n . J = S (n . Lambda) S^{-1} on the full
 *  truncation; rows above the last level are exact. */
BlockMatrix jacobi_matrix(const PolynomialSystem &sys,
                          const Eigen::VectorXd &n);

/** The same operator assembled from the explicit block formulas (valid on
 *  levels k <= total-2). */
BlockMatrix jacobi_matrix_explicit(const PolynomialSystem &sys,
                                   const Eigen::VectorXd &n);

/** Residual of the three-term relation at level k and point x. */
double three_term_residual(const PolynomialSystem &sys,
                           const Eigen::VectorXd &n, int k,
                           const Eigen::VectorXd &x);

/** Christoffel-Darboux kernel of order l. */
double cd_kernel(const PolynomialSystem &sys, int l,
                 const Eigen::VectorXd &x, const Eigen::VectorXd &y);

/** Residual of the Christoffel-Darboux formula at order l. */
double cd_formula_residual(const PolynomialSystem &sys, int l,
                           const Eigen::VectorXd &n,
                           const Eigen::VectorXd &x,
                           const Eigen::VectorXd &y);

/** Second kind functions C_[k](z) by quadrature of the Cauchy kernel;
 *  z must lie outside the support box on every axis. */
Eigen::VectorXd eval_C(const PolynomialSystem &sys, int k,
                       const Eigen::VectorXd &z);

/** Reduced second kind functions: the Cauchy denominator drops the axes
 *  listed in `dropped` (1-based). */
Eigen::VectorXd eval_C_reduced(const PolynomialSystem &sys, int k,
                               const std::vector<int> &dropped,
                               const Eigen::VectorXd &z);

/** Residual of the second-kind three-term relation at level k. */
double secondkind_three_term_residual(const PolynomialSystem &sys,
                                      const Eigen::VectorXd &n, int k,
                                      const Eigen::VectorXd &z);

/** Second kind Christoffel-Darboux kernel of order l. */
double q_kernel(const PolynomialSystem &sys, int l,
                const Eigen::VectorXd &x, const Eigen::VectorXd &y);

/** Residual of the second-kind Christoffel-Darboux formula (with the
 *  reduced-function correction term). */
double q_kernel_residual(const PolynomialSystem &sys, int l,
                         const Eigen::VectorXd &n,
                         const Eigen::VectorXd &x,
                         const Eigen::VectorXd &y);

/** Gram blocks of P by direct quadrature: integral of P_[k] P_[l]^T. */
Eigen::MatrixXd gram_block(const PolynomialSystem &sys, int k, int l);

} // namespace mvopr
