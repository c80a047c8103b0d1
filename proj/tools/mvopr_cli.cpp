// Command line front end: build a polynomial system from a measure
// (compute), run the identity suites (verify), or sweep finite-difference
// step sizes (convergence).

#include "mvopr/errors.hpp"
#include "mvopr/suites.hpp"
#include "mvopr/toda.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace mvopr;
using nlohmann::ordered_json;

namespace {

struct CliOptions
{
	std::string config;
	std::vector<std::string> suites;
	std::string out;
	std::uint64_t seed = 1;
	int quad_order = 0;
	int level = 4;
	int buffer = 1;
	MeasureSpec spec = MeasureSpec::lebesgue_box(2);

	bool seed_set = false, quad_set = false, level_set = false;
};

MeasureSpec measure_from_json(const ordered_json &m)
{
	const int D = m.value("D", 2);
	if (D < 1 || D > 3)
		throw ConfigError("measure.D must be 1, 2 or 3");
	const std::string kind = m.value("kind", "lebesgue");
	if (kind == "lebesgue")
		return MeasureSpec::lebesgue_box(D);
	if (kind == "jacobi")
		return MeasureSpec::jacobi_box(D, m.value("alpha", 0.5),
		                               m.value("beta", 0.5));
	throw ConfigError("measure.kind must be \"lebesgue\" or \"jacobi\"");
}

void load_config(CliOptions &opt)
{
	if (opt.config.empty())
		return;
	std::ifstream in(opt.config);
	if (!in)
		throw ConfigError("cannot open config file: " + opt.config);
	ordered_json j;
	try {
		in >> j;
	} catch (const nlohmann::json::exception &e) {
		throw ConfigError(std::string("config parse error: ") +
		                  e.what());
	}
	if (j.contains("measure"))
		opt.spec = measure_from_json(j["measure"]);
	if (!opt.level_set && j.contains("levels"))
		opt.level = j["levels"].get<int>();
	if (j.contains("buffer"))
		opt.buffer = j["buffer"].get<int>();
	if (!opt.quad_set && j.contains("quad_order"))
		opt.quad_order = j["quad_order"].get<int>();
	if (!opt.seed_set && j.contains("seed"))
		opt.seed = j["seed"].get<std::uint64_t>();
	if (opt.suites.empty() && j.contains("suites"))
		opt.suites = j["suites"].get<std::vector<std::string>>();
	if (opt.out.empty() && j.contains("out"))
		opt.out = j["out"].get<std::string>();
}

void validate(const CliOptions &opt)
{
	if (opt.level < 2 || opt.level > 8)
		throw ConfigError("levels must lie in [2, 8]");
	if (opt.buffer < 1 || opt.buffer > 3)
		throw ConfigError("buffer must lie in [1, 3]");
	if (opt.quad_order < 0 || opt.quad_order > 128)
		throw ConfigError("quad_order must lie in [0, 128]");
}

SuiteConfig suite_config(const CliOptions &opt)
{
	SuiteConfig cfg;
	cfg.spec = opt.spec;
	cfg.L = opt.level;
	cfg.B = opt.buffer;
	cfg.quad_order = opt.quad_order;
	cfg.seed = opt.seed;
	return cfg;
}

void write_output(const std::string &out, const std::string &text)
{
	if (out.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream f(out, std::ios::binary);
	if (!f)
		throw ConfigError("cannot open output file: " + out);
	f << text;
}

ordered_json matrix_json(const Eigen::MatrixXd &M)
{
	ordered_json rows = ordered_json::array();
	for (Eigen::Index i = 0; i < M.rows(); ++i) {
		ordered_json row = ordered_json::array();
		for (Eigen::Index j = 0; j < M.cols(); ++j)
			row.push_back(M(i, j));
		rows.push_back(row);
	}
	return rows;
}

int cmd_compute(const CliOptions &opt)
{
	int q = opt.quad_order > 0 ? opt.quad_order
	                           : (opt.spec.D <= 2 ? 64 : 32);
	PolynomialSystem sys =
	    build_system(opt.spec, FlowState::trivial(opt.spec.D),
	                 opt.level, opt.buffer, q);
	const BlockStructure &s = sys.structure();

	ordered_json j;
	j["dimension"] = s.D;
	j["levels"] = opt.level;
	j["buffer"] = opt.buffer;
	j["quad_order"] = q;
	j["level_sizes"] = s.sizes;
	j["H"] = ordered_json::array();
	j["beta"] = ordered_json::array();
	for (int k = 0; k < opt.level; ++k)
		j["H"].push_back(matrix_json(sys.H(k)));
	for (int k = 1; k < opt.level; ++k)
		j["beta"].push_back(matrix_json(sys.beta(k)));
	j["S"] = matrix_json(
	    sys.F.S.dense().topLeftCorner(s.offsets[opt.level],
	                                  s.offsets[opt.level]));
	j["jacobi"] = ordered_json::array();
	const int r = s.offsets[s.L - 1];
	for (int a = 1; a <= s.D; ++a) {
		Eigen::VectorXd e = Eigen::VectorXd::Unit(s.D, a - 1);
		j["jacobi"].push_back(
		    matrix_json(jacobi_matrix(sys, e).dense().topLeftCorner(
		        r, r)));
	}
	write_output(opt.out, j.dump(2) + "\n");
	return 0;
}

int cmd_verify(const CliOptions &opt)
{
	std::vector<std::string> names =
	    opt.suites.empty() ? suite_names() : opt.suites;
	std::vector<ReportRow> rows = run_suites(names, suite_config(opt));

	std::ostringstream table;
	table << std::left << std::setw(14) << "suite" << std::setw(36)
	      << "identity" << std::right << std::setw(12) << "residual"
	      << std::setw(12) << "tolerance" << "  status\n";
	bool all_pass = true;
	for (const auto &r : rows) {
		table << std::left << std::setw(14) << r.suite
		      << std::setw(36) << r.identity << std::right
		      << std::setw(12) << std::scientific
		      << std::setprecision(2) << r.residual << std::setw(12)
		      << r.tolerance << "  " << (r.pass ? "pass" : "FAIL")
		      << "\n";
		all_pass = all_pass && r.pass;
	}
	std::cout << table.str();

	if (!opt.out.empty())
		write_output(opt.out, report_json(rows));
	return all_pass ? 0 : 1;
}

int cmd_convergence(const CliOptions &opt)
{
	MeasureSpec spec = opt.spec.D == 2 ? opt.spec
	                                   : MeasureSpec::lebesgue_box(2);
	int q = opt.quad_order > 0 ? opt.quad_order : 64;
	PolynomialSystem sys = build_system(spec, FlowState::trivial(2),
	                                    opt.level, opt.buffer, q);
	Eigen::VectorXd x(2);
	x << 0.31, -0.47;

	std::ostringstream csv;
	csv << "identity,h,residual\n";
	csv << std::scientific << std::setprecision(6);
	for (double h : {1e-3, 5e-4, 2.5e-4}) {
		FdConfig cfg;
		cfg.richardson = false;
		cfg.h1 = h;
		cfg.h2 = h;
		LaxResiduals lax = lax_residuals(sys, 1, cfg);
		csv << "beta-flow," << h << "," << lax.dBeta << "\n";
		csv << "toda-equation," << h << ","
		    << toda_equation_residual(sys, 1, 2, 1, cfg) << "\n";
		csv << "schrodinger," << h << ","
		    << schrodinger_residual(sys, 1, 2, 1, x, cfg) << "\n";
		// sanity row: an identity exact at every step size
		csv << "factorization," << h << ","
		    << (sys.F.S.dense() * sys.M.G.dense() *
		            sys.F.S.dense().transpose() -
		        [&] {
			        const BlockStructure &s = sys.structure();
			        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(
			            s.total, s.total);
			        for (int k = 0; k < s.L; ++k)
				        H.block(s.offsets[k], s.offsets[k],
				                s.sizes[k], s.sizes[k]) =
				            sys.H(k);
			        return H;
		        }())
		               .norm() /
		           sys.M.G.dense().norm()
		    << "\n";
	}
	write_output(opt.out, csv.str());
	return 0;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"multivariate orthogonal polynomials from a measure"};
	app.require_subcommand(1);

	CliOptions opt;
	auto add_common = [&](CLI::App *sub) {
		sub->add_option("--config", opt.config,
		                "JSON configuration file");
		sub->add_option("--out", opt.out, "output file path");
		sub->add_option("--seed", opt.seed, "random seed")
		    ->each([&](const std::string &) { opt.seed_set = true; });
		sub->add_option("--quad-order", opt.quad_order,
		                "quadrature points per axis (0 = default)")
		    ->each([&](const std::string &) { opt.quad_set = true; });
		sub->add_option("--level", opt.level, "usable levels")
		    ->each([&](const std::string &) { opt.level_set = true; });
	};

	CLI::App *compute =
	    app.add_subcommand("compute", "factorize the moment matrix and "
	                                  "dump the recursion data");
	add_common(compute);
	CLI::App *verify =
	    app.add_subcommand("verify", "run identity suites and report "
	                                 "residuals");
	add_common(verify);
	verify->add_option("--suite", opt.suites,
	                   "suite name (repeatable; default: all)");
	CLI::App *convergence = app.add_subcommand(
	    "convergence", "finite-difference step-size sweep");
	add_common(convergence);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try {
		load_config(opt);
		validate(opt);
		if (compute->parsed())
			return cmd_compute(opt);
		if (verify->parsed())
			return cmd_verify(opt);
		return cmd_convergence(opt);
	} catch (const ConfigError &e) {
		std::cerr << "config error: " << e.what() << "\n";
		return 2;
	} catch (const Error &e) {
		std::cerr << "numerical breakdown: " << e.what() << "\n";
		return 3;
	}
}
