#include "stringmom/baselines.hpp"

#include <fmt/core.h>

#include <numeric>
#include <stdexcept>

namespace stringmom::baselines {

namespace {
constexpr double kPriceEps = 1e-12;
}

std::string_view to_string(BenchmarkKind kind) {
	switch (kind) {
	case BenchmarkKind::scalper:
		return "scalper";
	case BenchmarkKind::macd:
		return "macd";
	case BenchmarkKind::arima_000_c:
		return "arima_000_c";
	case BenchmarkKind::arima_010:
		return "arima_010";
	case BenchmarkKind::arima_010_c:
		return "arima_010_c";
	}
	return "?";
}

BenchmarkKind benchmark_kind_from_string(std::string_view name) {
	for (auto k : {BenchmarkKind::scalper, BenchmarkKind::macd, BenchmarkKind::arima_000_c, BenchmarkKind::arima_010,
	               BenchmarkKind::arima_010_c}) {
		if (name == to_string(k)) {
			return k;
		}
	}
	throw std::invalid_argument(fmt::format("unknown benchmark '{}'", name));
}

void validate(const BenchmarkConfig& cfg) {
	if (cfg.mean_window == 0) {
		throw std::invalid_argument("ARIMA mean window must be positive");
	}
	if (!(cfg.deadband >= 0.0)) {
		throw std::invalid_argument("ARIMA dead-band must be non-negative");
	}
	if (cfg.macd_fast == 0 || cfg.macd_signal == 0 || cfg.macd_scale == 0 || !(cfg.macd_fast < cfg.macd_slow)) {
		throw std::invalid_argument("MACD periods need 0 < fast < slow and positive signal/scale");
	}
	if (!(cfg.take_profit > 0.0) || !(cfg.stop_loss > 0.0)) {
		throw std::invalid_argument("scalper take-profit and stop-loss must be positive");
	}
	if (cfg.scalper_max_hold == 0) {
		throw std::invalid_argument("scalper max hold must be positive");
	}
}

double arima_forecast(const BenchmarkConfig& cfg, std::span<const double> history) {
	if (history.empty()) {
		throw std::invalid_argument("ARIMA forecast needs a non-empty history");
	}
	switch (cfg.kind) {
	case BenchmarkKind::arima_010:
		return history.back();
	case BenchmarkKind::arima_010_c:
		return history.back() + cfg.c;
	case BenchmarkKind::arima_000_c: {
		const std::size_t n = std::min(cfg.mean_window, history.size());
		const auto tail = history.last(n);
		return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(n) + cfg.c;
	}
	default:
		throw std::invalid_argument("not an ARIMA benchmark");
	}
}

MacdIndicator::MacdIndicator(std::size_t fast, std::size_t slow, std::size_t signal)
    : fast_alpha_(2.0 / (static_cast<double>(fast) + 1.0)),
      slow_alpha_(2.0 / (static_cast<double>(slow) + 1.0)),
      signal_alpha_(2.0 / (static_cast<double>(signal) + 1.0)),
      slow_(slow) {
	if (fast == 0 || signal == 0 || fast >= slow) {
		throw std::invalid_argument("MACD periods need 0 < fast < slow and signal > 0");
	}
}

int MacdIndicator::update(double price) {
	if (observed_ == 0) {
		fast_ema_ = price;
		slow_ema_ = price;
		signal_ema_ = 0.0;
		prev_diff_ = 0.0;
		observed_ = 1;
		return 0;
	}
	fast_ema_ += fast_alpha_ * (price - fast_ema_);
	slow_ema_ += slow_alpha_ * (price - slow_ema_);
	signal_ema_ += signal_alpha_ * (macd() - signal_ema_);
	++observed_;

	const double diff = macd() - signal_ema_;
	int out = 0;
	if (observed_ >= slow_) {
		if (prev_diff_ <= 0.0 && diff > 0.0) {
			out = 1;
		} else if (prev_diff_ >= 0.0 && diff < 0.0) {
			out = -1;
		}
	}
	prev_diff_ = diff;
	return out;
}

int macd_signal(const BenchmarkConfig& cfg, std::span<const double> history) {
	const std::size_t slow = cfg.macd_slow * cfg.macd_scale;
	if (history.size() < slow) {
		throw std::invalid_argument(fmt::format("MACD needs {} prices, got {}", slow, history.size()));
	}
	MacdIndicator ind(cfg.macd_fast * cfg.macd_scale, slow, cfg.macd_signal * cfg.macd_scale);
	int out = 0;
	for (double p : history) {
		out = ind.update(p);
	}
	return out;
}

ScalperAction scalper_signal(const BenchmarkConfig& cfg, const data::TickQuote& quote, double previous_mid,
                             std::span<const TradePosition> open_positions) {
	ScalperAction action;
	if (open_positions.empty()) {
		const double move = quote.mid() - previous_mid;
		if (move > 0.0) {
			action.open = Side::long_side;
		} else if (move < 0.0) {
			action.open = Side::short_side;
		}
		return action;
	}
	for (const auto& pos : open_positions) {
		const double gain = pos.side == Side::long_side ? quote.bid - pos.open_price : pos.open_price - quote.ask;
		if (gain >= cfg.take_profit - kPriceEps || gain <= -cfg.stop_loss + kPriceEps ||
		    quote.index - pos.open_tau >= cfg.scalper_max_hold) {
			action.close = true;
		}
	}
	return action;
}

ArimaStrategy::ArimaStrategy(BenchmarkConfig cfg) : cfg_(cfg) {
	validate(cfg_);
	if (cfg_.kind != BenchmarkKind::arima_000_c && cfg_.kind != BenchmarkKind::arima_010 &&
	    cfg_.kind != BenchmarkKind::arima_010_c) {
		throw std::invalid_argument("ArimaStrategy needs an ARIMA benchmark kind");
	}
}

double ArimaStrategy::forecast_next() const {
	if (cfg_.kind == BenchmarkKind::arima_000_c) {
		return window_sum_ / static_cast<double>(window_.size()) + cfg_.c;
	}
	return window_.back() + (cfg_.kind == BenchmarkKind::arima_010_c ? cfg_.c : 0.0);
}

backtest::Directive ArimaStrategy::on_tick(const data::TickQuote& quote, const backtest::Account&) {
	const double mid = quote.mid();
	int signal = 0;
	if (pending_forecast_) {
		const double gap = *pending_forecast_ - mid;
		signal = gap > cfg_.deadband ? 1 : (gap < -cfg_.deadband ? -1 : 0);
	}

	const std::size_t keep = cfg_.kind == BenchmarkKind::arima_000_c ? cfg_.mean_window : 1;
	window_.push_back(mid);
	window_sum_ += mid;
	if (window_.size() > keep) {
		window_sum_ -= window_.front();
		window_.pop_front();
	}
	// Periodic exact re-summation bounds the rolling-sum drift.
	if (++since_resum_ >= keep) {
		window_sum_ = std::accumulate(window_.begin(), window_.end(), 0.0);
		since_resum_ = 0;
	}
	if (window_.size() >= keep) {
		pending_forecast_ = forecast_next();
	}
	return backtest::signal_directive(quote.index, signal);
}

MacdStrategy::MacdStrategy(BenchmarkConfig cfg)
    : indicator_((validate(cfg), cfg.macd_fast * cfg.macd_scale), cfg.macd_slow * cfg.macd_scale,
                 cfg.macd_signal * cfg.macd_scale) {}

backtest::Directive MacdStrategy::on_tick(const data::TickQuote& quote, const backtest::Account&) {
	return backtest::signal_directive(quote.index, indicator_.update(quote.mid()));
}

ScalperStrategy::ScalperStrategy(BenchmarkConfig cfg) : cfg_(cfg) {
	validate(cfg_);
}

backtest::Directive ScalperStrategy::on_tick(const data::TickQuote& quote, const backtest::Account& account) {
	backtest::Directive d = backtest::hold_directive(quote.index);
	if (previous_mid_) {
		const auto action = scalper_signal(cfg_, quote, *previous_mid_, account.open_positions());
		if (action.close) {
			d.close_all = true;
		} else if (action.open) {
			d = backtest::signal_directive(quote.index, direction(*action.open));
		}
	}
	previous_mid_ = quote.mid();
	return d;
}

std::unique_ptr<backtest::Strategy> make_benchmark(const BenchmarkConfig& cfg) {
	switch (cfg.kind) {
	case BenchmarkKind::scalper:
		return std::make_unique<ScalperStrategy>(cfg);
	case BenchmarkKind::macd:
		return std::make_unique<MacdStrategy>(cfg);
	case BenchmarkKind::arima_000_c:
	case BenchmarkKind::arima_010:
	case BenchmarkKind::arima_010_c:
		return std::make_unique<ArimaStrategy>(cfg);
	}
	throw std::invalid_argument("unknown benchmark kind");
}

} // namespace stringmom::baselines
