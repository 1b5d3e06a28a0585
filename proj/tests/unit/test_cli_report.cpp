#include "stringmom/config.hpp"
#include "stringmom/error.hpp"
#include "stringmom/pipeline.hpp"
#include "stringmom/report.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using namespace stringmom;
namespace tst = stringmom::testing;
using namespace stringmom::app;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
	std::istringstream in(text);
	return parse_config(in);
}

const char* kSmall = R"(
[data]
source = synthetic
model = random_walk
n = 4000
volatility = 0.0001
spread_pips = 2

[model]
kind = pmbcs_selflearning

[strings]
l_s = 40
func = cos, sin
m = 0, 1
Q = 1, 8    ; two exponents

[predictor]
warmup = 100
band_window = 500

[evaluator]
eval_interval = 200
score_window = 50

[run]
seed = 11
)";

std::string slurp(const fs::path& p) {
	std::ifstream in(p, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

std::size_t line_count(const fs::path& p) {
	const auto s = slurp(p);
	return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST(Config, ParsesGridAndDefaults) {
	const auto cfg = parse(kSmall);
	EXPECT_EQ(cfg.kind, ModelKind::pmbcs_selflearning);
	EXPECT_EQ(cfg.strings.combinations(), 8u);
	EXPECT_EQ(cfg.strategy.max_hold, 80u);
	EXPECT_EQ(cfg.seed, 11u);
	EXPECT_EQ(*cfg.data.spread_pips, 2.0);
	const auto sets = cfg.strings.enumerate();
	ASSERT_EQ(sets.size(), 8u);
	EXPECT_EQ(sets[0].exponent, 1.0);
	EXPECT_EQ(sets[1].exponent, 8.0);
	EXPECT_EQ(sets[2].frequency, 1u);
	EXPECT_EQ(sets[4].function, strings::PatternFunction::sin);
	EXPECT_EQ(cfg.echo.at("strings.Q"), "1, 8");
}

TEST(Config, SelfLearningGridOf32) {
	const auto cfg = parse(R"(
[strings]
l_s = 900
m = 0, 1, 2, 3
phase = 0, 3.14
Q = 8, 16, 24, 32
)");
	EXPECT_EQ(cfg.strings.combinations(), 32u);
	EXPECT_EQ(cfg.strings.enumerate().size(), 32u);
	EXPECT_EQ(cfg.strategy.max_hold, 1800u);
	EXPECT_EQ(pmbcs_config(cfg).sets.size(), 32u);
	const auto trimmed = parse("[strings]\nl_s = 900\nQ = 8, 16, 24, 32\nm = 0,1,2,3\nn_s = 5\n");
	EXPECT_EQ(trimmed.strings.enumerate().size(), 5u);
}

TEST(Config, Rejections) {
	EXPECT_THROW(parse("[data]\nbogus = 1\n"), ConfigError);
	EXPECT_THROW(parse("[nosuch]\nx = 1\n"), ConfigError);
	EXPECT_THROW(parse("[data]\nn = many\n"), ConfigError);
	EXPECT_THROW(parse("[model]\nkind = lstm\n"), ConfigError);
	EXPECT_THROW(parse("[model]\nkind = pmbcs_simple\n[strings]\nl_s = 800, 900\n"), ConfigError);
	EXPECT_THROW(parse("[strings]\nl_s = 0\n"), ConfigError);
	EXPECT_THROW(parse("[strategy]\naltitude = 0\n"), ConfigError);
	EXPECT_NO_THROW(parse("[model]\nkind = pmbcs_simple\n[strings]\nl_s = 800\n"));
	EXPECT_NO_THROW(parse("[model]\nkind = macd\n"));
	EXPECT_THROW(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Pipeline, BundleIsComplete) {
	tst::TempDir dir("bundle");
	auto cfg = parse(kSmall);
	cfg.replica.enabled = true;
	cfg.replica.capacity = 8;
	cfg.replica.geometry.h_op = 5;
	cfg.replica.geometry.h_cl = 7;
	const auto outcome = execute(cfg);
	const auto files = write_bundle(outcome, cfg, dir.path());
	for (const char* name : {"nav.csv", "executions.csv", "spread_hist.csv", "trades_per_day.csv", "spin_hist.csv",
	                         "scores.csv", "momentum_incoming.csv", "momentum_outgoing.csv", "spin_predictions.csv",
	                         "manifest.json"}) {
		EXPECT_TRUE(fs::exists(dir.path() / name)) << name;
	}
	EXPECT_EQ(files.back().filename(), "manifest.json");
	EXPECT_EQ(line_count(dir.path() / "nav.csv"), cfg.data.n + 1);
	EXPECT_EQ(line_count(dir.path() / "scores.csv"), 9u);

	const auto manifest = nlohmann::json::parse(slurp(dir.path() / "manifest.json"));
	EXPECT_EQ(manifest["version"], std::string(version));
	EXPECT_EQ(manifest["seed"], 11);
	EXPECT_EQ(manifest["ticks"], 4000);
	EXPECT_EQ(manifest["parameter_sets"], 8);
	const auto& nav_entry = manifest["files"]["nav.csv"];
	EXPECT_EQ(nav_entry["bytes"], fs::file_size(dir.path() / "nav.csv"));
	char hex[16];
	std::snprintf(hex, sizeof hex, "%08x", file_crc32(dir.path() / "nav.csv"));
	EXPECT_EQ(nav_entry["crc32"], std::string(hex));
	EXPECT_DOUBLE_EQ(manifest["summary"]["final_nav"].get<double>(), outcome.result.summary.final_nav);
}

TEST(Pipeline, RerunsAreByteIdentical) {
	tst::TempDir a("rerun_a");
	tst::TempDir b("rerun_b");
	auto cfg = parse(kSmall);
	cfg.out = a.path();
	run(cfg);
	cfg.out = b.path();
	cfg.threads = 3;
	run(cfg);
	for (const auto& entry : fs::directory_iterator(a.path())) {
		const auto name = entry.path().filename();
		EXPECT_EQ(slurp(entry.path()), slurp(b.path() / name)) << name;
	}
}

TEST(Pipeline, BenchmarkBundleSkipsPmbcsFiles) {
	tst::TempDir dir("bench");
	auto cfg = parse("[data]\nn = 3000\nvolatility = 0.0001\n[model]\nkind = arima_010\n");
	const auto outcome = execute(cfg);
	EXPECT_EQ(outcome.model, "arima_010");
	EXPECT_FALSE(outcome.incoming.has_value());
	write_bundle(outcome, cfg, dir.path());
	EXPECT_TRUE(fs::exists(dir.path() / "nav.csv"));
	EXPECT_FALSE(fs::exists(dir.path() / "scores.csv"));
}

TEST(Pipeline, FileSourceRoundTrip) {
	tst::TempDir dir("file_src");
	data::SyntheticParams p;
	p.volatility = 1e-4;
	const auto stream = data::generate_synthetic(4, 1500, data::SyntheticModel::random_walk, p);
	{
		std::ofstream out(dir.path() / "ticks.csv");
		data::write_ticks(out, stream);
	}
	{
		std::ofstream ini(dir.path() / "run.ini");
		ini << "[data]\nsource = file\npath = ticks.csv\n[model]\nkind = macd\n";
	}
	const auto cfg = load_config(dir.path() / "run.ini");
	EXPECT_EQ(cfg.data.path, dir.path() / "ticks.csv");
	const auto loaded = load_stream(cfg);
	ASSERT_EQ(loaded.size(), stream.size());
	// Prices are written with six decimals.
	EXPECT_NEAR(loaded[700].bid, stream[700].bid, 5e-7 + 1e-12);
	EXPECT_NEAR(loaded[700].ask, stream[700].ask, 5e-7 + 1e-12);

	auto missing = cfg;
	missing.data.path = dir.path() / "absent.csv";
	EXPECT_THROW(load_stream(missing), DataError);
}

TEST(Sweep, RowsPerValueAndSpreadOrdering) {
	auto cfg = parse("[data]\nn = 3000\nvolatility = 0.0001\n[model]\nkind = arima_010\n");
	const std::vector<std::string> spreads{"0", "1", "2", "4"};
	const auto rows = sweep(cfg, SweepAxis::spread, spreads);
	ASSERT_EQ(rows.size(), 4u);
	for (std::size_t i = 1; i < rows.size(); ++i) {
		EXPECT_LE(rows[i].summary.final_nav, rows[i - 1].summary.final_nav);
	}
	std::ostringstream csv;
	write_sweep_csv(csv, rows);
	const std::string text = csv.str();
	EXPECT_EQ(text.substr(0, text.find('\n')), "axis_value,final_nav,nav_pct,mean,sigma");
	EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);

	auto pm = parse(kSmall);
	const auto ls = with_axis_value(pm, SweepAxis::l_s, "60");
	EXPECT_EQ(ls.strategy.max_hold, 120u);
	EXPECT_EQ(ls.strings.lengths, (std::vector<std::size_t>{60}));
	EXPECT_THROW(with_axis_value(pm, SweepAxis::Q, "abc"), ConfigError);
	EXPECT_THROW(sweep_axis_from_string("colour"), ConfigError);
	EXPECT_EQ(sweep_axis_from_string("n_s"), SweepAxis::n_s);
}

TEST(Report, ScoresCsv) {
	const std::vector<strings::StringParams> sets{{10, 1, 2.0, strings::PatternFunction::cos, 0.0},
	                                              {10, 2, 2.0, strings::PatternFunction::sin, 3.14}};
	std::vector<eval::SharpeScore> scores(2);
	scores[0].set_id = 0;
	scores[0].excess_mean = 0.5;
	scores[0].sigma = 0.25;
	scores[0].ratio = 2.0;
	scores[1].set_id = 1;
	std::ostringstream out;
	write_scores_csv(out, sets, scores);
	std::istringstream lines(out.str());
	std::string line;
	std::getline(lines, line);
	EXPECT_EQ(line, "set_id,l_s,m,Q,func,phase,excess_mean,sigma,ratio");
	std::getline(lines, line);
	EXPECT_EQ(line.substr(0, 14), "0,10,1,2,cos,0");
	std::getline(lines, line);
	EXPECT_EQ(line.substr(line.rfind(',') + 1), "undefined");
}

TEST(Config, ShippedExamplesLoad) {
	std::size_t seen = 0;
	for (const auto& entry : fs::directory_iterator(STRINGMOM_CONFIG_DIR)) {
		if (entry.path().extension() != ".ini") {
			continue;
		}
		++seen;
		EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
	}
	EXPECT_EQ(seen, 7u);
	EXPECT_EQ(load_config(fs::path(STRINGMOM_CONFIG_DIR) / "pmbcs_selflearning.ini").strings.combinations(), 32u);
}
