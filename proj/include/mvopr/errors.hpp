#pragma once

#include <stdexcept>
#include <string>

namespace mvopr {

/** Base class for all numerical/structural failures raised by the library. */
struct Error : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

/** A square pivot block is numerically singular (smallest singular value
 *  below 1e-12 times the largest). */
struct SingularPivot : Error
{
	using Error::Error;
};

/** The recursive factorization hit a singular pivot at a given level. */
struct SingularTruncation : Error
{
	int level;
	explicit SingularTruncation(int lvl)
	    : Error("singular truncation at level " + std::to_string(lvl)),
	      level(lvl)
	{}
};

/** A rectangular matrix expected to have full column (or row) rank does
 *  not, so its one-sided pseudo-inverse cannot be formed. */
struct RankDeficient : Error
{
	using Error::Error;
};

/** A block, level, or buffer outside the stored truncation was requested. */
struct OutOfRange : Error
{
	using Error::Error;
};

/** Node sampling on a hyperplane failed to produce a well-conditioned
 *  sample matrix within the retry budget. */
struct PoisednessFailure : Error
{
	using Error::Error;
};

/** An evaluation point sits on (or too close to) a transformation
 *  hyperplane or a degenerate direction. */
struct DegeneratePoint : Error
{
	using Error::Error;
};

/** A Cauchy-transform evaluation point is too close to the support box. */
struct TooCloseToSupport : Error
{
	using Error::Error;
};

/** A negative-power deformation factor vanishes at a quadrature node. */
struct PoleOnSupport : Error
{
	using Error::Error;
};

/** The validity region of an inverse discrete step does not contain the
 *  support box. */
struct ValidityRegion : Error
{
	using Error::Error;
};

/** The weight function evaluated to a non-finite value at a node. */
struct WeightEvaluation : Error
{
	using Error::Error;
};

/** A matrix expected to be orthogonal is not, within tolerance. */
struct NotOrthogonal : Error
{
	using Error::Error;
};

/** A configuration file could not be parsed or fails its invariants. */
struct ConfigError : Error
{
	using Error::Error;
};

} // namespace mvopr
