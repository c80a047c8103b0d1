#include "doctest.h"

#include "mvopr/errors.hpp"
#include "mvopr/suites.hpp"

using namespace mvopr;

TEST_SUITE("suites")
{

TEST_CASE("suite registry and error handling")
{
	CHECK(suite_names().size() == 13);
	CHECK_THROWS_AS(run_suite("no-such-suite", SuiteConfig{}),
	                ConfigError);
}

TEST_CASE("rows are ordered and serialization is deterministic")
{
	SuiteConfig cfg;
	cfg.L = 3;
	cfg.quad_order = 24;
	cfg.seed = 9;
	std::vector<std::string> names{"three-term", "orthogonality"};
	std::vector<ReportRow> rows = run_suites(names, cfg);
	REQUIRE(rows.size() >= 4);
	for (size_t i = 1; i < rows.size(); ++i)
		CHECK(std::tie(rows[i - 1].suite, rows[i - 1].identity) <=
		      std::tie(rows[i].suite, rows[i].identity));
	for (const auto &r : rows) {
		CHECK(r.pass);
		CHECK(r.millis == 0);
		CHECK_FALSE(r.paper_anchor.empty());
	}

	std::string j1 = report_json(rows);
	std::string j2 = report_json(run_suites(names, cfg));
	CHECK(j1 == j2);
	CHECK(j1.find("\"schema\": \"identity-report/1\"") !=
	      std::string::npos);
}

} // TEST_SUITE
