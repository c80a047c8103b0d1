#include "mvopr/measure.hpp"

#include "mvopr/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mvopr {

MeasureSpec MeasureSpec::lebesgue_box(int D)
{
	MeasureSpec s;
	s.D = D;
	s.lo = Eigen::VectorXd::Constant(D, -1.0);
	s.hi = Eigen::VectorXd::Constant(D, 1.0);
	s.kind = WeightKind::Constant;
	s.description = "lebesgue";
	return s;
}

MeasureSpec MeasureSpec::jacobi_box(int D, double alpha, double beta)
{
	MeasureSpec s = lebesgue_box(D);
	s.kind = WeightKind::JacobiProduct;
	s.jacobi_alpha = Eigen::VectorXd::Constant(D, alpha);
	s.jacobi_beta = Eigen::VectorXd::Constant(D, beta);
	s.description = "jacobi";
	return s;
}

double MeasureSpec::base_weight(const Eigen::VectorXd &x) const
{
	switch (kind) {
	case WeightKind::Constant:
		return 1.0;
	case WeightKind::JacobiProduct: {
		double w = 1.0;
		for (int a = 0; a < D; ++a)
			w *= std::pow(hi[a] - x[a], jacobi_alpha[a]) *
			     std::pow(x[a] - lo[a], jacobi_beta[a]);
		return w;
	}
	case WeightKind::Callback:
		return callback(x);
	}
	return 1.0;
}

FlowState FlowState::trivial(int D)
{
	FlowState s;
	s.N = Eigen::MatrixXd::Identity(D, D);
	s.q = Eigen::VectorXd::Constant(D, -2.0);
	s.m = Eigen::VectorXi::Zero(D);
	return s;
}

bool FlowState::is_trivial() const
{
	if (m.size() && !m.isZero())
		return false;
	for (const auto &t : times)
		if (!t.isZero())
			return false;
	return true;
}

void FlowState::resize_times(int D, int K)
{
	const size_t old = times.size();
	times.resize(K);
	for (size_t k = old; k < times.size(); ++k)
		times[k] = Eigen::VectorXd::Zero(
		    level_size(D, static_cast<int>(k) + 1));
}

FlowState FlowState::stepped(int a, int delta) const
{
	FlowState s = *this;
	s.m[a - 1] += delta;
	return s;
}

FlowState FlowState::time_shifted(int level, int pos, double delta) const
{
	FlowState s = *this;
	if (level < 1 || static_cast<size_t>(level) > s.times.size())
		throw OutOfRange("time_shifted: level beyond time truncation");
	s.times[level - 1][pos] += delta;
	return s;
}

void gauss_legendre(int n, Eigen::VectorXd &nodes, Eigen::VectorXd &weights)
{
	// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the
	// Legendre recurrence (off-diagonals k / sqrt(4k^2 - 1)).
	Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
	for (int k = 1; k < n; ++k) {
		double b = k / std::sqrt(4.0 * k * k - 1.0);
		J(k, k - 1) = J(k - 1, k) = b;
	}
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
	nodes = es.eigenvalues();
	weights.resize(n);
	for (int i = 0; i < n; ++i) {
		double v0 = es.eigenvectors()(0, i);
		weights[i] = 2.0 * v0 * v0;
	}
}

QuadratureRule build_quadrature(const MeasureSpec &spec, int per_axis)
{
	if (per_axis < 1)
		throw OutOfRange("build_quadrature: order must be positive");
	Eigen::VectorXd t, w;
	gauss_legendre(per_axis, t, w);

	long total = 1;
	for (int a = 0; a < spec.D; ++a)
		total *= per_axis;

	QuadratureRule rule;
	rule.per_axis = per_axis;
	rule.nodes.resize(total, spec.D);
	rule.weights.resize(total);

	std::vector<int> idx(spec.D, 0);
	Eigen::VectorXd x(spec.D);
	for (long j = 0; j < total; ++j) {
		double wj = 1.0;
		for (int a = 0; a < spec.D; ++a) {
			double mid = 0.5 * (spec.lo[a] + spec.hi[a]);
			double half = 0.5 * (spec.hi[a] - spec.lo[a]);
			x[a] = mid + half * t[idx[a]];
			wj *= half * w[idx[a]];
		}
		double bw = spec.base_weight(x);
		if (!std::isfinite(bw))
			throw WeightEvaluation(
			    "build_quadrature: non-finite weight at a node");
		rule.nodes.row(j) = x;
		rule.weights[j] = wj * bw;
		// odometer increment, last axis fastest
		for (int a = spec.D - 1; a >= 0; --a) {
			if (++idx[a] < per_axis)
				break;
			idx[a] = 0;
		}
	}
	return rule;
}

double deformed_weight(const Eigen::VectorXd &x, const FlowState &state)
{
	const int D = static_cast<int>(x.size());
	double w = 1.0;
	if (state.m.size()) {
		// N may carry extra rows beyond the D canonical directions
		for (int a = 0; a < state.m.size(); ++a) {
			int ma = state.m[a];
			if (ma == 0)
				continue;
			double f = state.N.row(a).dot(x) - state.q[a];
			if (ma < 0 && std::abs(f) < 1e-13)
				throw PoleOnSupport(
				    "deformed_weight: factor vanishes at node");
			for (int r = 0; r < std::abs(ma); ++r)
				w = ma > 0 ? w * f : w / f;
		}
	}
	if (!state.times.empty()) {
		double e = 0.0;
		for (size_t lv = 0; lv < state.times.size(); ++lv) {
			const Eigen::VectorXd &t = state.times[lv];
			if (t.isZero())
				continue;
			LevelBasis basis =
			    enumerate_level(D, static_cast<int>(lv) + 1);
			e += t.dot(eval_chi_level(basis, x));
		}
		w *= std::exp(e);
	}
	return w;
}

double integrate(const QuadratureRule &rule, const FlowState &state,
                 const std::function<double(const Eigen::VectorXd &)> &f)
{
	// Kahan-compensated accumulation in fixed node order.
	double sum = 0.0, comp = 0.0;
	for (long j = 0; j < rule.weights.size(); ++j) {
		Eigen::VectorXd x = rule.nodes.row(j);
		double term =
		    rule.weights[j] * deformed_weight(x, state) * f(x);
		double y = term - comp;
		double t = sum + y;
		comp = (t - sum) - y;
		sum = t;
	}
	return sum;
}

void check_validity_region(const MeasureSpec &spec, const Eigen::VectorXd &n,
                           double q)
{
	// max |n.x| over the box is attained at a corner
	double r = 0.0;
	for (int a = 0; a < spec.D; ++a)
		r += std::max(std::abs(n[a] * spec.lo[a]),
		              std::abs(n[a] * spec.hi[a]));
	if (r >= std::abs(q))
		throw ValidityRegion(
		    "validity region |n.x| < |q| does not contain the box");
}

} // namespace mvopr
