#pragma once

#include "mvopr/rng.hpp"
#include "mvopr/system.hpp"

#include <utility>
#include <vector>

namespace mvopr {

/** One multiplicative factor n.x - q applied to the measure. */
struct DarbouxStep
{
	Eigen::VectorXd n;
	double q = 0.0;
};

/** Flow state of the measure multiplied by prod_i (n_i.x - q_i): the
 *  directions are appended as extra rows of N with unit multiplicity. */
FlowState with_darboux_steps(const FlowState &base,
                             const std::vector<DarbouxStep> &steps);

/** Fresh quadrature + factorization of the transformed measure. */
PolynomialSystem transformed_system(const PolynomialSystem &sys,
                                    const std::vector<DarbouxStep> &steps);

/** Nodes on the hyperplane n.x = q: the offset point plus random tangent
 *  combinations, resampled until the requested sample matrix is well
 *  conditioned (reciprocal condition > 1e-8, retry budget 50). */
Eigen::MatrixXd poised_nodes(const PolynomialSystem &sys,
                             const DarbouxStep &step, int k, Xoshiro256 &rng);

/** Joint node sets for an m-step transformation at base level k: set i
 *  holds |[k+i-1]| nodes on hyperplane i and the stacked sample matrix
 *  over levels k..k+m-1 must be well conditioned. */
std::vector<Eigen::MatrixXd>
poised_node_sets(const PolynomialSystem &sys,
                 const std::vector<DarbouxStep> &steps, int k,
                 Xoshiro256 &rng);

/** Sample matrix: columns P_[l](p_j) over the rows of `nodes`. */
Eigen::MatrixXd sample_matrix(const PolynomialSystem &sys, int l,
                              const Eigen::MatrixXd &nodes);

/** Kernel polynomials (TP)_[k](x) of the m-step transformed measure from
 *  the quasi-determinant of the bordered stacked sample matrix (m = 1 is
 *  the elementary transform). */
Eigen::VectorXd christoffel_P(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k, const Eigen::VectorXd &x);

/** Transformed second kind functions (TC)_[k](z) (no 1/Q prefactor). */
Eigen::VectorXd christoffel_C(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k, const Eigen::VectorXd &z);

/** Transformed quasi-tau block (TH)_[k]. */
Eigen::MatrixXd christoffel_H(const PolynomialSystem &sys,
                              const std::vector<DarbouxStep> &steps,
                              const std::vector<Eigen::MatrixXd> &node_sets,
                              int k);

/** Resolvent block omega_([k],[k+j]) recovered from the sample matrices,
 *  0 <= j <= m. */
Eigen::MatrixXd
resolvent_block_samples(const PolynomialSystem &sys,
                        const std::vector<DarbouxStep> &steps,
                        const std::vector<Eigen::MatrixXd> &node_sets, int k,
                        int j);

/** Connection data of one lattice step: M = I + rho (lower bidiagonal)
 *  and omega = alpha + n.Lambda (upper bidiagonal). */
struct Connection
{
	std::vector<Eigen::MatrixXd> rho;   ///< rho_[k], k >= 1 (rho[0] empty)
	std::vector<Eigen::MatrixXd> alpha; ///< alpha_[k], k >= 0
	/** The same coefficients through the difference route: rho from the
	 *  beta jump, alpha from the translated three-term blocks (alpha_alt
	 *  stops one level earlier). */
	std::vector<Eigen::MatrixXd> rho_alt, alpha_alt;
	BlockMatrix M;
	BlockMatrix omega;
};

/** Assemble M_a and omega_a from a system and its one-step translate;
 *  both displayed routes for rho and alpha are exposed for comparison. */
Connection connection_matrices(const PolynomialSystem &sys,
                               const PolynomialSystem &stepped, int a);

/** (rho_[k], alpha_[k]) from quasi-determinants of the truncated Jacobi
 *  matrix, with no translated data. */
std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
resolvent_quasideterminant(const PolynomialSystem &sys,
                           const Eigen::VectorXd &n, double q, int k);

/** Residuals of the LU and UL interchange (n_a.J - q_a) = M_a omega_a and
 *  T_a(n_a.J) - q_a = omega_a M_a. */
std::pair<double, double> lu_ul_residuals(const PolynomialSystem &sys,
                                          const PolynomialSystem &stepped,
                                          int a);

/** Residuals of the discrete Lax and Zakharov-Shabat equations assembled
 *  from a 2x2 lattice patch: {lax_omega, lax_M, zs_omega, zs_M}. */
struct LaxZsResiduals
{
	double lax_omega, lax_M, zs_omega, zs_M;
};
LaxZsResiduals discrete_laxzs_residuals(const PolynomialSystem &sys,
                                        const PolynomialSystem &Ta,
                                        const PolynomialSystem &Tb,
                                        const PolynomialSystem &Tab, int a,
                                        int b);

/** Residuals of the discrete Toda equations (H-equation, beta-equation)
 *  at level k from the same lattice patch. */
std::pair<double, double> discrete_toda_residuals(const PolynomialSystem &sys,
                                                  const PolynomialSystem &Ta,
                                                  const PolynomialSystem &Tb,
                                                  const PolynomialSystem &Tab,
                                                  int a, int b, int k);

/** P_[k] at the common intersection point N^{-1} q, from the quasi-tau
 *  quotient chain over all D unit-step translates. */
Eigen::VectorXd tau_quotient_P(const PolynomialSystem &sys,
                               const std::vector<PolynomialSystem> &stepped,
                               int k);

/** C_[k] at q (N = I) from the inverse-translate quasi-tau sum; `inv[a]`
 *  must hold the system with inverse steps applied on axes a+1..D (so
 *  inv[0] is the full inverse translate and inv[D] the base system). */
Eigen::VectorXd tau_quotient_C(const PolynomialSystem &sys,
                               const std::vector<PolynomialSystem> &inv,
                               int k);

/** Residual of the one-step kernel transformation identity
 *  K^(l)(x,y) = (n.x-q) TK^(l-1)(x,y) + P_[l-1](x)^T H_[l-1]^{-1}
 *  (TP)_[l-1](y). */
double cd_transform_residual(const PolynomialSystem &sys,
                             const PolynomialSystem &tsys,
                             const DarbouxStep &step, int l,
                             const Eigen::VectorXd &x,
                             const Eigen::VectorXd &y);

/** Residual of the two-step kernel transformation identity at order l. */
double cd_transform_residual_2step(const PolynomialSystem &sys,
                                   const PolynomialSystem &tsys,
                                   const std::vector<DarbouxStep> &steps,
                                   int l, const Eigen::VectorXd &x,
                                   const Eigen::VectorXd &y);

} // namespace mvopr
