#pragma once

#include "mvopr/blockmat.hpp"
#include "mvopr/measure.hpp"

namespace mvopr {

/** Moment matrix of a (deformed) measure, truncated at L usable levels
 *  plus B buffer levels. */
struct MomentMatrix
{
	BlockMatrix G; ///< levels 0 .. L+B-1
	int L = 0;     ///< usable levels
	int B = 0;     ///< buffer levels (consumed by shift multiplications)

	int total_levels() const { return L + B; }
};

/** Assemble all blocks up to level L+B-1 by quadrature of the deformed
 *  measure, then symmetrize by averaging with the transpose. */
MomentMatrix moment_matrix(const MeasureSpec &spec, const FlowState &state,
                           int L, int B, const QuadratureRule &rule);

/** Exact time derivative of G with respect to t_qtime: the truncation of
 *  Lambda_qtime G, valid on the first L+B-|qtime| levels. */
BlockMatrix moment_time_derivative(const MomentMatrix &M,
                                   const MultiIndex &qtime);

/** Exact one-step discrete flow on axis a: (n_a . Lambda - q_a) G, valid
 *  on the first L+B-1 levels. */
BlockMatrix discrete_step_matrix(const MomentMatrix &M,
                                 const FlowState &state, int a);

} // namespace mvopr
