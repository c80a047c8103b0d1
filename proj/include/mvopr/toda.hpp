#pragma once

#include "mvopr/system.hpp"

#include <utility>
#include <vector>

namespace mvopr {

/** Finite-difference configuration: step sizes by derivative order and an
 *  optional Richardson extrapolation level for first derivatives. */
struct FdConfig
{
	double h1 = 1e-4; ///< first derivatives
	double h2 = 1e-3; ///< second derivatives
	double h3 = 2e-3; ///< third derivatives
	bool richardson = true;
};

/** Index of one continuous time t_q: the level |q| and the position of q
 *  within its level. */
struct TimeIndex
{
	int level;
	int pos;
};

/** Locate the time attached to the monomial exponent q. */
TimeIndex time_index(int D, const MultiIndex &q);

/** Fresh build of the system with the listed additive time shifts. */
PolynomialSystem
time_shifted_system(const PolynomialSystem &sys,
                    const std::vector<std::pair<TimeIndex, double>> &shifts);

/** Which factor of the Cholesky data to differentiate. */
enum class Factor
{
	H,     ///< quasi-tau block H_[k]
	Beta,  ///< first subdiagonal beta_[k]
	Beta2, ///< second subdiagonal S_([k],[k-2])
};

/** Mixed central-difference derivative of the selected factor block at
 *  level k with respect to the listed times (order 1..3).  Repeated
 *  entries nest central stencils; Richardson applies to order 1 only. */
Eigen::MatrixXd factor_time_derivative(const PolynomialSystem &sys, Factor f,
                                       int k,
                                       const std::vector<TimeIndex> &times,
                                       const FdConfig &cfg = {});

/** Residuals of the first-order Lax relations for the flow t_a:
 *  dS: (dS/dt_a) S^{-1} + (J_a)_- on the exact rows;
 *  dH: dH_[k]/dt_a H_[k]^{-1} = beta_[k] Lambda_a - Lambda_a beta_[k+1];
 *  dBeta: H_[k+1] Lambda_a^T H_[k]^{-1} = -dbeta_[k+1]/dt_a. */
struct LaxResiduals
{
	double dS, dH, dBeta;
};
LaxResiduals lax_residuals(const PolynomialSystem &sys, int a,
                           const FdConfig &cfg = {});

/** Residual of the 2D-Toda equation for H_[k] in times t_a, t_b. */
double toda_equation_residual(const PolynomialSystem &sys, int a, int b,
                              int k, const FdConfig &cfg = {});

/** Residual of the same lattice equation written for beta_[k]. */
double toda_beta_equation_residual(const PolynomialSystem &sys, int a, int b,
                                   int k, const FdConfig &cfg = {});

/** Residuals of the two mixed differential-difference Toda equations
 *  (derivative in t_a, difference on axis b); Tb is the stepped system. */
std::pair<double, double> toda_mixed_residuals(const PolynomialSystem &sys,
                                               const PolynomialSystem &Tb,
                                               int a, int b, int k,
                                               const FdConfig &cfg = {});

/** Residuals of the beta recurrence from logarithmic derivatives of the
 *  quasi-tau blocks: (one-step form, fully telescoped form) at level k+1. */
std::pair<double, double> beta_tau_chain(const PolynomialSystem &sys, int k,
                                         const FdConfig &cfg = {});

/** Coherent time shift [q]_n truncated at K levels: block k equals
 *  (1/k) M_[k] chi_[k](n/q). */
std::vector<Eigen::VectorXd> miwa_shift_vector(const Eigen::VectorXd &n,
                                               double q, int K);

/** Compare the measure deformed by the K-truncated coherent shift against
 *  the exact factor (1 - n.x/q)^{-1}; returns the maximal relative
 *  H-block deviation. */
double miwa_consistency_check(const MeasureSpec &spec,
                              const Eigen::VectorXd &n, double q, int K,
                              int L, int B, int quad_order);

/** Residual of the fixed-site differential-difference compatibility
 *  equation for beta at level k, assembled from a 2x2 lattice patch. */
double kp_teo3_residual(const PolynomialSystem &sys,
                        const PolynomialSystem &Ta,
                        const PolynomialSystem &Tb,
                        const PolynomialSystem &Tab, int a, int b, int k,
                        const FdConfig &cfg = {});

/** Residual of the second-order (Schroedinger-type) linear equation on
 *  the Baker function block P_[k](x) e^{t(x)}. */
double schrodinger_residual(const PolynomialSystem &sys, int a, int b, int k,
                            const Eigen::VectorXd &x,
                            const FdConfig &cfg = {});

/** Residual of the third-order linear equation on the same block. */
double third_order_residual(const PolynomialSystem &sys, int a, int b, int c,
                            int k, const Eigen::VectorXd &x,
                            const FdConfig &cfg = {});

/** Residual of the two-variable fourth-order nonlinear equation for
 *  beta_[k] in the pair of directions (A, B). */
double teo4_residual(const PolynomialSystem &sys, int A, int B, int k,
                     const FdConfig &cfg = {});

/** Residual of the first equation of the beta/beta2 system coupling the
 *  first two subdiagonals through second-level times. */
double beta2_system_residual(const PolynomialSystem &sys, int a, int b,
                             int k, const FdConfig &cfg = {});

/** Residual of the difference-differential link for the polynomials:
 *  dP_[k]/dt_a = (x_a - q_a) Delta_a P_[k] - (Delta_a beta_[k])
 *  (Lambda_a)_([k-1],[k]) P_[k]. */
double difference_differential_residual(const PolynomialSystem &sys,
                                        const PolynomialSystem &Ta, int a,
                                        int k, const Eigen::VectorXd &x,
                                        const FdConfig &cfg = {});

} // namespace mvopr
