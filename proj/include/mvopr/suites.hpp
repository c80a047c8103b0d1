#pragma once

#include "mvopr/system.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvopr {

/** One verified identity: the suite it belongs to, a short identity name,
 *  the anchor string documenting which statement it checks, the number of
 *  levels of the system used, the measured residual and its tolerance.
 *  millis is fixed to zero so reports are byte-identical across runs. */
struct ReportRow
{
	std::string suite;
	std::string identity;
	std::string paper_anchor;
	int levels = 0;
	double residual = 0.0;
	double tolerance = 0.0;
	bool pass = false;
	long long millis = 0;
};

/** Shared configuration of the identity suites. */
struct SuiteConfig
{
	MeasureSpec spec = MeasureSpec::lebesgue_box(2);
	int L = 4;          ///< usable levels
	int B = 1;          ///< buffer levels
	int quad_order = 0; ///< 0 picks the per-dimension default (64/32)
	std::uint64_t seed = 1;
};

/** All suite names in canonical order. */
const std::vector<std::string> &suite_names();

/** Run one suite; throws ConfigError for an unknown name. */
std::vector<ReportRow> run_suite(const std::string &name,
                                 const SuiteConfig &cfg);

/** Run several suites and return rows ordered by suite then identity. */
std::vector<ReportRow> run_suites(std::vector<std::string> names,
                                  const SuiteConfig &cfg);

/** Deterministic JSON serialization of a report. */
std::string report_json(const std::vector<ReportRow> &rows);

} // namespace mvopr
