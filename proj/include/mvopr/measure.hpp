#pragma once

#include "mvopr/mindex.hpp"

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace mvopr {

/** Kinds of base weights supported on a product box. */
enum class WeightKind
{
	Constant,      ///< w(x) = 1
	JacobiProduct, ///< w(x) = prod_a (b_a - x_a)^alpha_a (x_a - a_a)^beta_a
	Callback       ///< user-supplied evaluator
};

/** A measure w(x) dx on a finite product box. */
struct MeasureSpec
{
	int D = 1;
	Eigen::VectorXd lo; ///< box lower bounds
	Eigen::VectorXd hi; ///< box upper bounds
	WeightKind kind = WeightKind::Constant;
	Eigen::VectorXd jacobi_alpha; ///< per-axis exponents at the upper end
	Eigen::VectorXd jacobi_beta;  ///< per-axis exponents at the lower end
	std::function<double(const Eigen::VectorXd &)> callback;
	std::string description;

	/** Lebesgue measure on [-1, 1]^D. */
	static MeasureSpec lebesgue_box(int D);

	/** Product (1-x_a)^alpha (1+x_a)^beta weight on [-1, 1]^D. */
	static MeasureSpec jacobi_box(int D, double alpha, double beta);

	double base_weight(const Eigen::VectorXd &x) const;
};

/** Tensor-product quadrature rule mapped to the box (base weight already
 *  folded into the weights). */
struct QuadratureRule
{
	Eigen::MatrixXd nodes; ///< one node per row, D columns
	Eigen::VectorXd weights;
	int per_axis = 0;
};

/** Discrete/continuous deformation state of a measure: directions N (rows
 *  n_a), offsets q, lattice position m, and continuous times t grouped by
 *  level (times[k-1] holds the level-k coefficient vector). */
struct FlowState
{
	Eigen::MatrixXd N;
	Eigen::VectorXd q;
	Eigen::VectorXi m;
	std::vector<Eigen::VectorXd> times;

	static FlowState trivial(int D);

	bool is_trivial() const;
	int K() const { return static_cast<int>(times.size()); }

	/** Ensure times holds levels 1..K (zero-filled). */
	void resize_times(int D, int K);

	FlowState stepped(int a, int delta = 1) const;
	FlowState time_shifted(int level, int pos, double delta) const;
};

/** Gauss-Legendre nodes/weights on [-1, 1]. */
void gauss_legendre(int n, Eigen::VectorXd &nodes, Eigen::VectorXd &weights);

/** Tensor-product Gauss-Legendre rule on the spec's box with the base
 *  weight folded in.  Throws WeightEvaluation on non-finite weights. */
QuadratureRule build_quadrature(const MeasureSpec &spec, int per_axis);

/** Deformation factor e^{t(x)} prod_a (n_a.x - q_a)^{m_a} at a point.
 *  Throws PoleOnSupport if a negative-power factor vanishes at x. */
double deformed_weight(const Eigen::VectorXd &x, const FlowState &state);

/** Deterministic compensated quadrature of f against the deformed
 *  measure. */
double integrate(const QuadratureRule &rule, const FlowState &state,
                 const std::function<double(const Eigen::VectorXd &)> &f);

/** Check that |n.x| < |q| holds on all box corners (validity region of
 *  inverse steps and Miwa factors); throws ValidityRegion otherwise. */
void check_validity_region(const MeasureSpec &spec, const Eigen::VectorXd &n,
                           double q);

} // namespace mvopr
