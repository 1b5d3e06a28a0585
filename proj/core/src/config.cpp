#include "stringmom/config.hpp"

#include "stringmom/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <stdexcept>

namespace stringmom::app {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos) {
		return {};
	}
	const auto e = s.find_last_not_of(" \t\r");
	return std::string(s.substr(b, e - b + 1));
}

// Drops an inline "# ..." or "; ..." comment.
std::string clean_value(std::string_view raw) {
	for (std::size_t i = 0; i < raw.size(); ++i) {
		if ((raw[i] == '#' || raw[i] == ';') && (i == 0 || raw[i - 1] == ' ' || raw[i - 1] == '\t')) {
			return trim(raw.substr(0, i));
		}
	}
	return trim(raw);
}

std::vector<std::string> split_list(const std::string& value) {
	std::vector<std::string> parts;
	std::size_t start = 0;
	while (true) {
		const auto comma = value.find(',', start);
		auto item = trim(std::string_view(value).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
		if (item.empty()) {
			throw ConfigError(fmt::format("empty item in list '{}'", value));
		}
		parts.push_back(std::move(item));
		if (comma == std::string::npos) {
			return parts;
		}
		start = comma + 1;
	}
}

double to_double(const std::string& key, const std::string& s) {
	double v = 0.0;
	const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size()) {
		throw ConfigError(fmt::format("{}: '{}' is not a number", key, s));
	}
	return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& s) {
	std::uint64_t v = 0;
	const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
	if (ec != std::errc{} || ptr != s.data() + s.size()) {
		throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, s));
	}
	return v;
}

bool to_bool(const std::string& key, const std::string& s) {
	if (s == "true" || s == "yes" || s == "on" || s == "1") {
		return true;
	}
	if (s == "false" || s == "no" || s == "off" || s == "0") {
		return false;
	}
	throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, s));
}

class Section {
public:
	Section(const pt::ptree& root, std::string name, RunConfig& cfg) : name_(std::move(name)), cfg_(cfg) {
		if (const auto node = root.get_child_optional(name_)) {
			for (const auto& [key, child] : *node) {
				values_[key] = clean_value(child.data());
			}
		}
	}

	void finish() const {
		for (const auto& [key, value] : values_) {
			if (!used_.contains(key)) {
				throw ConfigError(fmt::format("unknown key '{}' in [{}]", key, name_));
			}
		}
	}

	std::optional<std::string> raw(const std::string& key) {
		used_.insert(key);
		const auto it = values_.find(key);
		if (it == values_.end()) {
			return std::nullopt;
		}
		cfg_.echo[name_ + "." + key] = it->second;
		return it->second;
	}

	std::string qualified(const std::string& key) const { return name_ + "." + key; }

	template <class F>
	void with(const std::string& key, F&& apply) {
		if (auto v = raw(key)) {
			apply(qualified(key), *v);
		}
	}

	void number(const std::string& key, double& target) {
		with(key, [&](const auto& k, const auto& v) { target = to_double(k, v); });
	}
	template <class T>
	void integer(const std::string& key, T& target) {
		with(key, [&](const auto& k, const auto& v) { target = static_cast<T>(to_unsigned(k, v)); });
	}
	void flag(const std::string& key, bool& target) {
		with(key, [&](const auto& k, const auto& v) { target = to_bool(k, v); });
	}
	void optional_number(const std::string& key, std::optional<double>& target) {
		with(key, [&](const auto& k, const auto& v) { target = to_double(k, v); });
	}

private:
	std::string name_;
	RunConfig& cfg_;
	std::map<std::string, std::string> values_;
	std::set<std::string> used_;
};

// Converts std::invalid_argument from the domain parsers into ConfigError.
template <class F>
auto as_config(const std::string& key, F&& f) {
	try {
		return f();
	} catch (const std::invalid_argument& e) {
		throw ConfigError(fmt::format("{}: {}", key, e.what()));
	}
}

data::SyntheticModel synthetic_model_from_string(const std::string& key, const std::string& s) {
	if (s == "random_walk") {
		return data::SyntheticModel::random_walk;
	}
	if (s == "random_walk_drift") {
		return data::SyntheticModel::random_walk_drift;
	}
	if (s == "sinusoid") {
		return data::SyntheticModel::sinusoid;
	}
	throw ConfigError(fmt::format("{}: unknown synthetic model '{}'", key, s));
}

void read(const pt::ptree& root, RunConfig& cfg) {
	static const std::set<std::string> known = {"data",     "model",    "strings", "predictor", "evaluator",
	                                            "strategy", "benchmark", "replica", "report",    "run"};
	for (const auto& [name, node] : root) {
		if (!known.contains(name)) {
			throw ConfigError(node.empty() ? fmt::format("key '{}' outside any section", name)
			                               : fmt::format("unknown section [{}]", name));
		}
	}

	{
		Section s(root, "data", cfg);
		auto& d = cfg.data;
		s.with("source", [&](const auto& k, const auto& v) {
			if (v == "synthetic") {
				d.source = data::StreamSource::synthetic;
			} else if (v == "file") {
				d.source = data::StreamSource::file;
			} else {
				throw ConfigError(fmt::format("{}: expected synthetic or file, got '{}'", k, v));
			}
		});
		s.with("path", [&](const auto&, const auto& v) { d.path = v; });
		s.with("model", [&](const auto& k, const auto& v) { d.model = synthetic_model_from_string(k, v); });
		s.integer("n", d.n);
		s.number("start_price", d.synthetic.start_price);
		s.number("volatility", d.synthetic.volatility);
		s.number("drift", d.synthetic.drift);
		s.number("amplitude", d.synthetic.amplitude);
		s.number("period", d.synthetic.period);
		s.number("pip", d.pip);
		s.optional_number("spread_pips", d.spread_pips);
		s.with("tick_ms", [&](const auto& k, const auto& v) {
			d.synthetic.tick_interval = std::chrono::milliseconds(to_unsigned(k, v));
		});
		s.with("start", [&](const auto& k, const auto& v) {
			d.synthetic.start_time = as_config(k, [&] { return parse_timestamp(v); });
		});
		s.with("instrument", [&](const auto&, const auto& v) { d.synthetic.instrument = v; });
		s.finish();
	}
	{
		Section s(root, "model", cfg);
		s.with("kind", [&](const auto& k, const auto& v) {
			if (v == "pmbcs_simple") {
				cfg.kind = ModelKind::pmbcs_simple;
			} else if (v == "pmbcs_selflearning") {
				cfg.kind = ModelKind::pmbcs_selflearning;
			} else {
				cfg.kind = ModelKind::benchmark;
				cfg.benchmark.kind = as_config(k, [&] { return baselines::benchmark_kind_from_string(v); });
			}
		});
		s.finish();
	}
	{
		Section s(root, "strings", cfg);
		auto& g = cfg.strings;
		s.with("l_s", [&](const auto& k, const auto& v) {
			g.lengths.clear();
			for (const auto& item : split_list(v)) {
				g.lengths.push_back(to_unsigned(k, item));
			}
		});
		s.with("func", [&](const auto& k, const auto& v) {
			g.functions.clear();
			for (const auto& item : split_list(v)) {
				g.functions.push_back(as_config(k, [&] { return strings::pattern_function_from_string(item); }));
			}
		});
		s.with("m", [&](const auto& k, const auto& v) {
			g.frequencies.clear();
			for (const auto& item : split_list(v)) {
				g.frequencies.push_back(static_cast<unsigned>(to_unsigned(k, item)));
			}
		});
		s.with("phase", [&](const auto& k, const auto& v) {
			g.phases.clear();
			for (const auto& item : split_list(v)) {
				g.phases.push_back(to_double(k, item));
			}
		});
		s.with("Q", [&](const auto& k, const auto& v) {
			g.exponents.clear();
			for (const auto& item : split_list(v)) {
				g.exponents.push_back(to_double(k, item));
			}
		});
		s.with("n_s", [&](const auto& k, const auto& v) { g.n_s = to_unsigned(k, v); });
		s.finish();
	}
	{
		Section s(root, "predictor", cfg);
		auto& p = cfg.predictor;
		s.integer("warmup", p.warmup);
		s.integer("band_window", p.band_window);
		s.number("lo_quantile", p.lo_quantile);
		s.number("hi_quantile", p.hi_quantile);
		s.number("band_lo", p.initial_band.lo);
		s.number("band_hi", p.initial_band.hi);
		s.with("band_mode", [&](const auto& k, const auto& v) {
			if (v == "fixed") {
				p.mode = predict::BandMode::fixed;
			} else if (v == "rolling") {
				p.mode = predict::BandMode::rolling_quantile;
			} else {
				throw ConfigError(fmt::format("{}: expected fixed or rolling, got '{}'", k, v));
			}
		});
		s.finish();
	}
	{
		Section s(root, "evaluator", cfg);
		auto& e = cfg.evaluator;
		s.number("penalty", e.penalty);
		s.with("method", [&](const auto& k, const auto& v) {
			if (v == "sharpe") {
				e.method = pmbcs::ScoreMethod::sharpe;
			} else if (v == "volatility") {
				e.method = pmbcs::ScoreMethod::return_volatility;
			} else {
				throw ConfigError(fmt::format("{}: expected sharpe or volatility, got '{}'", k, v));
			}
		});
		s.integer("eval_interval", e.eval_interval);
		s.integer("score_window", e.score_window);
		s.optional_number("min_sharpe", e.min_sharpe);
		s.optional_number("max_abs_skewness", e.max_abs_skewness);
		s.with("shadow_max_hold", [&](const auto& k, const auto& v) { cfg.shadow_max_hold = to_unsigned(k, v); });
		s.finish();
	}
	{
		Section s(root, "strategy", cfg);
		auto& st = cfg.strategy;
		s.number("altitude", st.altitude);
		s.integer("max_open", st.max_open);
		s.integer("max_opens_per_window", st.max_opens_per_window);
		s.with("rate_window_s", [&](const auto& k, const auto& v) {
			st.rate_window = std::chrono::seconds(to_unsigned(k, v));
		});
		s.integer("units", st.units);
		s.with("max_hold", [&](const auto& k, const auto& v) {
			st.max_hold = to_unsigned(k, v);
			cfg.max_hold_set = true;
		});
		s.number("start_nav", st.start_nav);
		s.finish();
	}
	{
		Section s(root, "benchmark", cfg);
		auto& b = cfg.benchmark;
		s.number("c", b.c);
		s.integer("mean_window", b.mean_window);
		s.number("deadband", b.deadband);
		s.integer("macd_fast", b.macd_fast);
		s.integer("macd_slow", b.macd_slow);
		s.integer("macd_signal", b.macd_signal);
		s.integer("macd_scale", b.macd_scale);
		s.number("take_profit", b.take_profit);
		s.number("stop_loss", b.stop_loss);
		s.integer("scalper_max_hold", b.scalper_max_hold);
		s.finish();
	}
	{
		Section s(root, "replica", cfg);
		auto& r = cfg.replica;
		s.flag("enabled", r.enabled);
		s.integer("h_op", r.geometry.h_op);
		s.integer("h_cl", r.geometry.h_cl);
		s.integer("capacity", r.capacity);
		s.number("p", r.geometry.p);
		s.number("c_d", r.geometry.c_d);
		s.number("q", r.q);
		s.finish();
	}
	{
		Section s(root, "report", cfg);
		s.integer("momentum_bins", cfg.report.momentum_bins);
		s.number("spread_bin_pips", cfg.report.spread_bin_pips);
		s.integer("spin_bin", cfg.report.spin_bin);
		s.finish();
	}
	{
		Section s(root, "run", cfg);
		s.integer("seed", cfg.seed);
		s.with("out", [&](const auto&, const auto& v) { cfg.out = v; });
		cfg.echo.erase("run.out"); // the bundle must not depend on where it is written
		s.integer("threads", cfg.threads);
		s.finish();
	}
}

} // namespace

std::size_t StringGrid::combinations() const {
	const std::size_t full = lengths.size() * functions.size() * frequencies.size() * phases.size() * exponents.size();
	return n_s ? std::min(*n_s, full) : full;
}

std::vector<strings::StringParams> StringGrid::enumerate() const {
	std::vector<strings::StringParams> sets;
	for (auto l : lengths) {
		for (auto f : functions) {
			for (auto m : frequencies) {
				for (auto phi : phases) {
					for (auto q : exponents) {
						sets.push_back({l, m, q, f, phi});
					}
				}
			}
		}
	}
	if (n_s && *n_s < sets.size()) {
		sets.resize(*n_s);
	}
	return sets;
}

std::string_view to_string(ModelKind kind, const baselines::BenchmarkConfig& benchmark) {
	switch (kind) {
	case ModelKind::pmbcs_simple:
		return "pmbcs_simple";
	case ModelKind::pmbcs_selflearning:
		return "pmbcs_selflearning";
	case ModelKind::benchmark:
		return baselines::to_string(benchmark.kind);
	}
	return "?";
}

void finalize(RunConfig& cfg) {
	auto check = [](const char* what, auto&& f) {
		try {
			f();
		} catch (const std::invalid_argument& e) {
			throw ConfigError(fmt::format("{}: {}", what, e.what()));
		}
	};

	if (cfg.data.source == data::StreamSource::file && cfg.data.path.empty()) {
		throw ConfigError("data.path is required for file streams");
	}
	if (cfg.data.source == data::StreamSource::synthetic && cfg.data.n == 0) {
		throw ConfigError("data.n must be positive");
	}
	if (!(cfg.data.pip > 0.0)) {
		throw ConfigError("data.pip must be positive");
	}
	if (cfg.data.spread_pips && !(*cfg.data.spread_pips >= 0.0)) {
		throw ConfigError("data.spread_pips must be non-negative");
	}

	if (cfg.kind != ModelKind::benchmark) {
		const auto& g = cfg.strings;
		if (g.lengths.empty() || g.functions.empty() || g.frequencies.empty() || g.phases.empty() ||
		    g.exponents.empty()) {
			throw ConfigError("every strings list needs at least one value");
		}
		if (g.n_s && *g.n_s == 0) {
			throw ConfigError("strings.n_s must be positive");
		}
		const auto sets = g.enumerate();
		for (const auto& p : sets) {
			check("strings", [&] { strings::validate(p); });
		}
		if (cfg.kind == ModelKind::pmbcs_simple && sets.size() != 1) {
			throw ConfigError(
			    fmt::format("pmbcs_simple needs exactly one string parameter set, the grid yields {}", sets.size()));
		}
		if (!cfg.max_hold_set) {
			cfg.strategy.max_hold = 2 * *std::max_element(g.lengths.begin(), g.lengths.end());
		}
		check("predictor", [&] { predict::validate(cfg.predictor); });
		check("evaluator", [&] { pmbcs::validate(cfg.evaluator); });
	} else {
		check("benchmark", [&] { baselines::validate(cfg.benchmark); });
	}
	check("strategy", [&] { backtest::validate(cfg.strategy); });
	if (cfg.shadow_max_hold && *cfg.shadow_max_hold == 0) {
		throw ConfigError("evaluator.shadow_max_hold must be positive");
	}

	const auto& r = cfg.replica;
	if (r.enabled) {
		if (r.geometry.h_op == 0 || r.geometry.h_cl <= r.geometry.h_op) {
			throw ConfigError("replica needs 0 < h_op < h_cl");
		}
		if (!(r.geometry.p >= 1.0) || !(r.geometry.c_d >= 0.0) || !(r.q > 0.0)) {
			throw ConfigError("replica needs p >= 1, c_d >= 0, q > 0");
		}
		if (r.capacity < r.geometry.h_cl - r.geometry.h_op + 1) {
			throw ConfigError("replica.capacity must exceed h_cl - h_op");
		}
	}
	if (cfg.report.momentum_bins == 0 || cfg.report.spin_bin == 0 || !(cfg.report.spread_bin_pips > 0.0)) {
		throw ConfigError("report bins must be positive");
	}
}

RunConfig parse_config(std::istream& in) {
	pt::ptree root;
	try {
		pt::read_ini(in, root);
	} catch (const pt::ini_parser_error& e) {
		throw ConfigError(fmt::format("config line {}: {}", e.line(), e.message()));
	}
	RunConfig cfg;
	read(root, cfg);
	finalize(cfg);
	return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
	std::ifstream in(path);
	if (!in) {
		throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
	}
	auto cfg = parse_config(in);
	if (cfg.data.source == data::StreamSource::file && cfg.data.path.is_relative()) {
		cfg.data.path = path.parent_path() / cfg.data.path;
	}
	return cfg;
}

pmbcs::PmbcsConfig pmbcs_config(const RunConfig& cfg) {
	pmbcs::PmbcsConfig p;
	p.sets = cfg.strings.enumerate();
	p.self_learning = cfg.kind == ModelKind::pmbcs_selflearning;
	p.predictor = cfg.predictor;
	p.evaluator = cfg.evaluator;
	p.shadow_max_hold = cfg.shadow_max_hold.value_or(cfg.strategy.max_hold);
	p.momentum_bins = cfg.report.momentum_bins;
	p.threads = cfg.threads;
	return p;
}

} // namespace stringmom::app
