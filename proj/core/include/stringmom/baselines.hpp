#pragma once

#include "stringmom/backtester.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

namespace stringmom::baselines {

enum class BenchmarkKind { scalper, macd, arima_000_c, arima_010, arima_010_c };

std::string_view to_string(BenchmarkKind kind);
BenchmarkKind benchmark_kind_from_string(std::string_view name);

struct BenchmarkConfig {
	BenchmarkKind kind = BenchmarkKind::arima_010;

	// ARIMA family: closed-form forecasters, no fitting.
	double c = 0.0;                 // drift / mean offset, price units per tick
	std::size_t mean_window = 1000; // arima_000_c rolling mean
	double deadband = 5e-5;         // |forecast - price| needed to trade

	// MACD, in ticks before scaling.
	std::size_t macd_fast = 12;
	std::size_t macd_slow = 26;
	std::size_t macd_signal = 9;
	std::size_t macd_scale = 1; // ticks per bar

	// SCALPER offsets from the entry price.
	double take_profit = 0.0005;
	double stop_loss = 0.0005;
	std::size_t scalper_max_hold = 300;
};

void validate(const BenchmarkConfig& cfg);

/// Next-tick forecast: arima_010 -> last price, arima_010_c -> last + c,
/// arima_000_c -> mean of the last min(mean_window, n) prices + c.
double arima_forecast(const BenchmarkConfig& cfg, std::span<const double> history);

/// Streaming MACD. EMAs start at the first price with smoothing 2/(period+1);
/// the signal line starts at the first MACD value. update() returns +1 when
/// the MACD line crosses above the signal line, -1 when it crosses below, 0
/// otherwise, and 0 until `slow` prices have been seen.
class MacdIndicator {
public:
	MacdIndicator(std::size_t fast, std::size_t slow, std::size_t signal);

	int update(double price);

	double macd() const { return fast_ema_ - slow_ema_; }
	double signal_line() const { return signal_ema_; }
	std::size_t observed() const { return observed_; }

private:
	double fast_alpha_;
	double slow_alpha_;
	double signal_alpha_;
	std::size_t slow_;
	double fast_ema_ = 0.0;
	double slow_ema_ = 0.0;
	double signal_ema_ = 0.0;
	double prev_diff_ = 0.0;
	std::size_t observed_ = 0;
};

/// Crossing signal at the last point of `history`. Throws
/// std::invalid_argument when history is shorter than the slow period.
int macd_signal(const BenchmarkConfig& cfg, std::span<const double> history);

struct ScalperAction {
	std::optional<Side> open;
	bool close = false;
};

/// Flat: open in the direction of the last mid move. In a position: close at
/// the take-profit or stop-loss offset (long watches the bid, short the ask)
/// or after scalper_max_hold ticks.
ScalperAction scalper_signal(const BenchmarkConfig& cfg, const data::TickQuote& quote, double previous_mid,
                             std::span<const TradePosition> open_positions);

class ArimaStrategy final : public backtest::Strategy {
public:
	explicit ArimaStrategy(BenchmarkConfig cfg);
	backtest::Directive on_tick(const data::TickQuote& quote, const backtest::Account& account) override;
	std::string_view name() const override { return to_string(cfg_.kind); }

private:
	double forecast_next() const;

	BenchmarkConfig cfg_;
	std::deque<double> window_;
	double window_sum_ = 0.0;
	std::size_t since_resum_ = 0;
	std::optional<double> pending_forecast_;
};

class MacdStrategy final : public backtest::Strategy {
public:
	explicit MacdStrategy(BenchmarkConfig cfg);
	backtest::Directive on_tick(const data::TickQuote& quote, const backtest::Account& account) override;
	std::string_view name() const override { return "macd"; }

private:
	MacdIndicator indicator_;
};

class ScalperStrategy final : public backtest::Strategy {
public:
	explicit ScalperStrategy(BenchmarkConfig cfg);
	backtest::Directive on_tick(const data::TickQuote& quote, const backtest::Account& account) override;
	std::string_view name() const override { return "scalper"; }

private:
	BenchmarkConfig cfg_;
	std::optional<double> previous_mid_;
};

std::unique_ptr<backtest::Strategy> make_benchmark(const BenchmarkConfig& cfg);

} // namespace stringmom::baselines
