#pragma once

#include "mvopr/system.hpp"

#include <vector>

namespace mvopr {

/** Matrix of the k-th symmetric power of an orthogonal R in the canonical
 *  basis {e^q}: column q_i expands (R e_1)^{(.)a_1} ... (R e_D)^{(.)a_D}.
 *  Throws NotOrthogonal unless R^T R = I to 1e-10. */
Eigen::MatrixXd symmetric_power_matrix(const Eigen::MatrixXd &R, int k);

/** A linear isometry together with its per-level symmetric powers and the
 *  eta matrices representing the action on the monomial vector:
 *  eta_[k] = M_[k]^{-1} [R^{(.)k}] M_[k], with M the multinomial diagonal;
 *  eta_[k]^{-1} = [R^{(.)k}]^T. */
struct IsometryAction
{
	Eigen::MatrixXd R;
	std::vector<Eigen::MatrixXd> power; ///< [R^{(.)k}], k < L
	std::vector<Eigen::MatrixXd> eta;   ///< eta_[k], k < L

	int levels() const { return static_cast<int>(eta.size()); }
	Eigen::MatrixXd eta_inverse(int k) const
	{
		return power[k].transpose();
	}
};

/** Build the action for levels 0..L-1; throws NotOrthogonal. */
IsometryAction make_isometry_action(const Eigen::MatrixXd &R, int L);

/** max over levels k of |chi_[k](R x) - eta_[k] chi_[k](x)|. */
double chi_equivariance_residual(const IsometryAction &action,
                                 const Eigen::VectorXd &x);

/** max over levels of the relative defect of
 *  (R n).Lambda = eta (n.Lambda) eta^{-1}. */
double shift_conjugation_residual(const IsometryAction &action,
                                  const Eigen::VectorXd &n);

/** Relative defect of the right inverse (n.Lambda) eta Lambda_a^T eta^{-1}
 *  = I, where n = R e_a. */
double right_inverse_residual(const IsometryAction &action, int a);

/** Residuals of the invariance consequences for an R-invariant measure:
 *  moment:  eta G eta^T = G
 *  S:       eta S eta^{-1} = S
 *  H:       eta_[k] H_[k] eta_[k]^T = H_[k]
 *  beta:    eta_[k] beta_[k] = beta_[k] eta_[k-1]
 *  P:       P(R x) = eta P(x) at sampled points
 *  jacobi:  (R n).J = eta (n.J) eta^{-1} on the exact rows
 *  kernel:  K^(l)(R x, R y) = K^(l)(x, y) at sampled point pairs. */
struct InvarianceResiduals
{
	double moment, S, H, beta, P, jacobi, kernel;

	double max() const;
};
InvarianceResiduals
measure_invariance_residuals(const PolynomialSystem &sys,
                             const IsometryAction &action);

/** Invariance condition on a truncated time vector: defect is
 *  max over k of |t_[k] eta_[k] - t_[k]|, invariant iff below 1e-10. */
struct TimeInvariance
{
	bool invariant;
	double defect;
};
TimeInvariance invariant_time_check(const IsometryAction &action,
                                    const std::vector<Eigen::VectorXd> &t);

} // namespace mvopr
