#include "stringmom/predictor.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace stringmom::predict {

void validate(const PredictorConfig& cfg) {
	if (cfg.band_window < 2) {
		throw std::invalid_argument("band window must hold at least two momenta");
	}
	if (!(cfg.lo_quantile >= 0.0 && cfg.lo_quantile < cfg.hi_quantile && cfg.hi_quantile <= 1.0)) {
		throw std::invalid_argument("band quantiles must satisfy 0 <= lo < hi <= 1");
	}
	if (!(cfg.initial_band.lo >= 0.0 && cfg.initial_band.lo < cfg.initial_band.hi && cfg.initial_band.hi <= 1.0)) {
		throw std::invalid_argument("initial band must satisfy 0 <= lo < hi <= 1");
	}
}

int slope_direction(double now, double before) {
	return now > before ? 1 : (now < before ? -1 : 0);
}

PredictorState::PredictorState(strings::StringParams params, PredictorConfig cfg)
    : params_(params), cfg_(cfg), band_(cfg.initial_band) {
	strings::validate(params_);
	validate(cfg_);
}

int PredictorState::update_and_signal(const strings::MomentumRecord& m, int direction_hint) {
	if (!(m.params == params_)) {
		throw std::invalid_argument(fmt::format("momentum from {} fed to predictor for {}", strings::describe(m.params),
		                                        strings::describe(params_)));
	}
	return update_and_signal(m.value, m.degenerate, direction_hint);
}

int PredictorState::update_and_signal(double value, bool degenerate, int direction_hint) {
	if (direction_hint < -1 || direction_hint > 1) {
		throw std::invalid_argument("direction hint must be -1, 0 or +1");
	}
	if (degenerate) {
		return 0;
	}
	if (!(value >= 0.0 && value <= 1.0)) {
		throw std::invalid_argument(fmt::format("momentum {} outside [0, 1]", value));
	}

	history_.push_back(value);
	if (history_.size() > cfg_.band_window) {
		history_.pop_front();
	}
	++observed_;

	if (!warmed_up()) {
		return 0;
	}
	if (cfg_.mode == BandMode::rolling_quantile) {
		const Band estimate{quantile(cfg_.lo_quantile), quantile(cfg_.hi_quantile)};
		if (estimate.lo < estimate.hi) {
			band_ = estimate;
		}
	}
	return band_.contains(value) ? direction_hint : 0;
}

double PredictorState::quantile(double q) const {
	const auto& ranked = history_.get<1>();
	const std::size_t n = ranked.size();
	const double pos = q * static_cast<double>(n - 1);
	const auto below = static_cast<std::size_t>(std::floor(pos));
	const double frac = pos - static_cast<double>(below);
	const double a = *ranked.nth(below);
	if (frac == 0.0 || below + 1 >= n) {
		return a;
	}
	const double b = *ranked.nth(below + 1);
	return a + frac * (b - a);
}

std::vector<double> PredictorState::history() const {
	return {history_.begin(), history_.end()};
}

TradeCommand aggregate(std::span<const int> per_set, std::size_t tau) {
	if (per_set.empty()) {
		throw std::invalid_argument("aggregate needs at least one prediction");
	}
	int total = 0;
	for (int v : per_set) {
		if (v < -1 || v > 1) {
			throw std::invalid_argument(fmt::format("prediction {} outside {{-1, 0, +1}}", v));
		}
		total += v;
	}
	TradeCommand cmd;
	cmd.tau = tau;
	cmd.per_set.assign(per_set.begin(), per_set.end());
	cmd.summary = static_cast<double>(total) / static_cast<double>(per_set.size());
	return cmd;
}

UnitHistogramCounter::UnitHistogramCounter(std::size_t bins) : counts_(bins, 0) {
	if (bins == 0) {
		throw std::invalid_argument("histogram needs at least one bin");
	}
}

void UnitHistogramCounter::add(double value) {
	if (!(value >= 0.0 && value <= 1.0)) {
		throw std::invalid_argument(fmt::format("histogram value {} outside [0, 1]", value));
	}
	const auto bins = counts_.size();
	auto bin = static_cast<std::size_t>(value * static_cast<double>(bins));
	++counts_[std::min(bin, bins - 1)];
	++total_;
}

void UnitHistogramCounter::merge(const UnitHistogramCounter& other) {
	if (other.counts_.size() != counts_.size()) {
		throw std::invalid_argument("cannot merge histograms with different bin counts");
	}
	for (std::size_t i = 0; i < counts_.size(); ++i) {
		counts_[i] += other.counts_[i];
	}
	total_ += other.total_;
}

UnitHistogram UnitHistogramCounter::normalized() const {
	UnitHistogram h;
	h.mass.assign(counts_.size(), 0.0);
	if (total_ == 0) {
		return h;
	}
	for (std::size_t i = 0; i < counts_.size(); ++i) {
		h.mass[i] = static_cast<double>(counts_[i]) / static_cast<double>(total_);
	}
	return h;
}

std::pair<UnitHistogram, UnitHistogram> momentum_histograms(std::span<const double> incoming,
                                                            std::span<const double> outgoing, std::size_t bins) {
	UnitHistogramCounter in(bins);
	UnitHistogramCounter out(bins);
	for (double v : incoming) {
		in.add(v);
	}
	for (double v : outgoing) {
		out.add(v);
	}
	return {in.normalized(), out.normalized()};
}

void write_histogram_csv(std::ostream& out, const UnitHistogram& hist) {
	out << "bin_lower,mass\n";
	for (std::size_t i = 0; i < hist.bins(); ++i) {
		out << fmt::format("{:.10g},{:.10g}\n", hist.lower(i), hist.mass[i]);
	}
}

} // namespace stringmom::predict
