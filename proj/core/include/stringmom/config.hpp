#pragma once

#include "stringmom/backtester.hpp"
#include "stringmom/baselines.hpp"
#include "stringmom/market_data.hpp"
#include "stringmom/pmbcs.hpp"
#include "stringmom/predictor.hpp"
#include "stringmom/spin_replica.hpp"
#include "stringmom/string_core.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stringmom::app {

enum class ModelKind { pmbcs_simple, pmbcs_selflearning, benchmark };

struct DataSpec {
	data::StreamSource source = data::StreamSource::synthetic;
	std::filesystem::path path;
	data::SyntheticModel model = data::SyntheticModel::random_walk;
	std::size_t n = 10000;
	data::SyntheticParams synthetic;
	double pip = 1e-4;
	std::optional<double> spread_pips; // re-spread the loaded stream
};

/// Cartesian grid of string parameters. Enumeration order is length,
/// function, frequency, phase, exponent (exponent varies fastest); n_s keeps
/// the first n_s combinations.
struct StringGrid {
	std::vector<std::size_t> lengths{900};
	std::vector<strings::PatternFunction> functions{strings::PatternFunction::cos};
	std::vector<unsigned> frequencies{1};
	std::vector<double> phases{0.0};
	std::vector<double> exponents{1.0};
	std::optional<std::size_t> n_s;

	std::size_t combinations() const;
	std::vector<strings::StringParams> enumerate() const;
};

struct ReplicaSpec {
	bool enabled = false;
	replica::ReplicaGeometry geometry;
	std::size_t capacity = 256; // N + 1 stored replicas
	double q = 1.0;             // end-point map exponent
};

struct ReportSpec {
	std::size_t momentum_bins = 20;
	double spread_bin_pips = 0.1;
	std::size_t spin_bin = 10; // ticks
};

struct RunConfig {
	DataSpec data;
	ModelKind kind = ModelKind::pmbcs_selflearning;
	baselines::BenchmarkConfig benchmark;
	StringGrid strings;
	predict::PredictorConfig predictor;
	pmbcs::EvaluatorConfig evaluator;
	backtest::StrategyConfig strategy;
	std::optional<std::size_t> shadow_max_hold; // default: strategy.max_hold
	bool max_hold_set = false;
	ReplicaSpec replica;
	ReportSpec report;
	std::uint64_t seed = 1;
	std::filesystem::path out = "out";
	unsigned threads = 0;

	/// section.key -> value as read, for the run manifest.
	std::map<std::string, std::string> echo;
};

std::string_view to_string(ModelKind kind, const baselines::BenchmarkConfig& benchmark);

/**
 * INI reader. Sections: data, model, strings, predictor, evaluator,
 * strategy, benchmark, replica, report, run. Lists are comma separated.
 * Unknown sections or keys, unparsable values and violated invariants throw
 * ConfigError.
 */
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Cross-field checks; also resolves the max_hold default (2 * longest l_s)
/// when the strategy section does not set it.
void finalize(RunConfig& cfg);

pmbcs::PmbcsConfig pmbcs_config(const RunConfig& cfg);

} // namespace stringmom::app
