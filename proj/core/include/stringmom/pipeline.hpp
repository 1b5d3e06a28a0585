#pragma once

#include "stringmom/backtester.hpp"
#include "stringmom/config.hpp"
#include "stringmom/evaluator.hpp"
#include "stringmom/market_data.hpp"
#include "stringmom/predictor.hpp"
#include "stringmom/spin_replica.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stringmom::app {

/// Replica forecast made when a long position opened, next to the spin the
/// trade realized.
struct SpinPrediction {
	std::size_t tau = 0;
	double fuzzy_spin = 0.0;
	replica::Spin realized = -1;
};

struct RunOutcome {
	std::string model;
	std::size_t ticks = 0;
	backtest::BacktestResult result;
	std::vector<strings::StringParams> sets;
	std::vector<eval::SharpeScore> scores; // PMBCS only, at the last tick
	std::optional<predict::UnitHistogram> incoming;
	std::optional<predict::UnitHistogram> outgoing;
	data::BinnedHistogram spread_hist;
	data::DayHistogram trades_per_day;
	replica::SpinHistograms spin_hist;
	std::optional<std::vector<SpinPrediction>> spin_predictions;
};

/// File or synthetic stream, re-spread when data.spread_pips is set.
data::TickStream load_stream(const RunConfig& cfg);

/// data -> momenta -> signals -> evaluator -> backtester, in memory.
RunOutcome execute(const RunConfig& cfg);
RunOutcome execute(const RunConfig& cfg, const data::TickStream& stream);

/**
 * Replica diagnostic over the closed long trades.
 *
 * Every closed long contributes a replica built from the h_op + 1 quotes up
 * to its open, with the spin it realized. Once `capacity` replicas exist
 * each later long open is scored with the fuzzy spin of the store holding
 * only trades closed before it.
 */
std::vector<SpinPrediction> replica_predictions(const data::TickStream& stream,
                                                std::span<const TradePosition> closed, const ReplicaSpec& spec);

/// Executes and writes the report bundle into cfg.out.
RunOutcome run(const RunConfig& cfg);

enum class SweepAxis { l_s, Q, func, spread, n_s };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

/// Copy of `cfg` with the axis set to one value. Throws ConfigError on a value
/// that does not parse for the axis.
RunConfig with_axis_value(const RunConfig& cfg, SweepAxis axis, const std::string& value);

struct SweepRow {
	std::string value;
	backtest::NavSummary summary;
};

/// One isolated run per value with the shared seed.
std::vector<SweepRow> sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<std::string>& values);

/// `axis_value,final_nav,nav_pct,mean,sigma`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace stringmom::app
