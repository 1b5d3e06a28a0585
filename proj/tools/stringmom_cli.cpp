#include "stringmom/config.hpp"
#include "stringmom/error.hpp"
#include "stringmom/market_data.hpp"
#include "stringmom/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace app = stringmom::app;
namespace data = stringmom::data;

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kNumericExit = 4;

struct Overrides {
	std::string config;
	std::optional<std::uint64_t> seed;
	std::optional<std::string> out;
	std::optional<unsigned> threads;
};

app::RunConfig load(const Overrides& o) {
	auto cfg = app::load_config(o.config);
	if (o.seed) {
		cfg.seed = *o.seed;
		cfg.echo["run.seed"] = std::to_string(*o.seed);
	}
	if (o.out) {
		cfg.out = *o.out;
	}
	if (o.threads) {
		cfg.threads = *o.threads;
	}
	return cfg;
}

void add_common(CLI::App& cmd, Overrides& o) {
	cmd.add_option("--config", o.config, "INI run configuration")->required();
	cmd.add_option("--seed", o.seed, "override run.seed");
	cmd.add_option("--out", o.out, "override run.out");
	cmd.add_option("--threads", o.threads, "momentum worker threads (0: all cores)");
}

int do_run(const Overrides& o) {
	const auto cfg = load(o);
	const auto outcome = app::run(cfg);
	const auto& s = outcome.result.summary;
	fmt::print("{}: {} ticks, {} closed trades, final NAV {:.2f} ({:+.4f} %), bundle in {}\n", outcome.model,
	           outcome.ticks, outcome.result.closed.size(), s.final_nav, s.nav_pct, cfg.out.string());
	return 0;
}

int do_sweep(const Overrides& o, const std::string& axis_name, const std::vector<std::string>& values) {
	const auto cfg = load(o);
	const auto axis = app::sweep_axis_from_string(axis_name);
	const auto rows = app::sweep(cfg, axis, values);
	app::write_sweep_csv(std::cout, rows);

	std::filesystem::create_directories(cfg.out);
	const auto path = cfg.out / fmt::format("sweep_{}.csv", axis_name);
	std::ofstream file(path, std::ios::binary | std::ios::trunc);
	if (!file) {
		throw stringmom::DataError(fmt::format("cannot write '{}'", path.string()));
	}
	app::write_sweep_csv(file, rows);
	return 0;
}

struct GenOptions {
	std::string model = "random_walk";
	std::size_t n = 10000;
	std::uint64_t seed = 1;
	std::string out;
	data::SyntheticParams params;
	double spread_pips = 2.0;
	double pip = 1e-4;
	std::uint64_t tick_ms = 1000;
};

int do_gen(const GenOptions& g) {
	data::SyntheticModel model;
	if (g.model == "random_walk") {
		model = data::SyntheticModel::random_walk;
	} else if (g.model == "random_walk_drift") {
		model = data::SyntheticModel::random_walk_drift;
	} else if (g.model == "sinusoid") {
		model = data::SyntheticModel::sinusoid;
	} else {
		throw stringmom::ConfigError(fmt::format("unknown model '{}' (random_walk, random_walk_drift, sinusoid)", g.model));
	}
	auto params = g.params;
	params.spread = g.spread_pips * g.pip;
	params.tick_interval = std::chrono::milliseconds(g.tick_ms);
	const auto stream = data::generate_synthetic(g.seed, g.n, model, params);
	std::ofstream out(g.out, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw stringmom::DataError(fmt::format("cannot write '{}'", g.out));
	}
	data::write_ticks(out, stream);
	return 0;
}

} // namespace

int main(int argc, char** argv) {
	CLI::App cli{"String-momentum tick backtester"};
	cli.require_subcommand(1);

	Overrides run_opts;
	auto* run = cli.add_subcommand("run", "run one configuration and write its report bundle");
	add_common(*run, run_opts);

	Overrides sweep_opts;
	std::string axis;
	std::vector<std::string> values;
	auto* sweep = cli.add_subcommand("sweep", "one run per axis value, comparison table on stdout");
	add_common(*sweep, sweep_opts);
	sweep->add_option("--axis", axis, "l_s, Q, func, spread (pips) or n_s")->required();
	sweep->add_option("--values", values, "comma separated values")->required()->delimiter(',');

	GenOptions gen_opts;
	auto* gen = cli.add_subcommand("gen", "write a synthetic tick file");
	gen->add_option("--model", gen_opts.model, "random_walk, random_walk_drift or sinusoid")->required();
	gen->add_option("--n", gen_opts.n, "number of ticks")->required();
	gen->add_option("--seed", gen_opts.seed, "generator seed")->required();
	gen->add_option("--out", gen_opts.out, "output CSV")->required();
	gen->add_option("--start-price", gen_opts.params.start_price, "first mid price");
	gen->add_option("--volatility", gen_opts.params.volatility, "per-tick noise standard deviation");
	gen->add_option("--drift", gen_opts.params.drift, "per-tick drift (random_walk_drift)");
	gen->add_option("--amplitude", gen_opts.params.amplitude, "sinusoid amplitude");
	gen->add_option("--period", gen_opts.params.period, "sinusoid period in ticks");
	gen->add_option("--spread-pips", gen_opts.spread_pips, "bid/ask spread in pips");
	gen->add_option("--pip", gen_opts.pip, "pip size in price units");
	gen->add_option("--tick-ms", gen_opts.tick_ms, "milliseconds between ticks");

	try {
		cli.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = cli.exit(e);
		return code == 0 ? 0 : kConfigExit;
	}

	try {
		if (*run) {
			return do_run(run_opts);
		}
		if (*sweep) {
			return do_sweep(sweep_opts, axis, values);
		}
		return do_gen(gen_opts);
	} catch (const stringmom::ConfigError& e) {
		std::cerr << "config error: " << e.what() << '\n';
		return kConfigExit;
	} catch (const std::invalid_argument& e) {
		std::cerr << "config error: " << e.what() << '\n';
		return kConfigExit;
	} catch (const stringmom::DataError& e) {
		std::cerr << "data error: " << e.what() << '\n';
		return kDataExit;
	} catch (const stringmom::NumericError& e) {
		std::cerr << "numeric error: " << e.what() << '\n';
		return kNumericExit;
	} catch (const std::filesystem::filesystem_error& e) {
		std::cerr << "data error: " << e.what() << '\n';
		return kDataExit;
	} catch (const std::exception& e) {
		std::cerr << "numeric error: " << e.what() << '\n';
		return kNumericExit;
	}
}
