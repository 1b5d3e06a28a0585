#include "stringmom/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stringmom::eval {

namespace {

struct ExcessMoments {
	double mean = 0.0;
	double rms = 0.0;
};

ExcessMoments excess_moments(ClosedTradeLedgerView ledger, double penalty) {
	if (ledger.empty()) {
		throw std::invalid_argument("Sharpe ratio of an empty ledger");
	}
	if (!(penalty >= 0.0)) {
		throw std::invalid_argument("penalty must be non-negative");
	}
	double sum = 0.0;
	double sum_sq = 0.0;
	for (const auto& trade : ledger) {
		if (trade.increments.empty()) {
			throw std::invalid_argument("closed trade without accepted results");
		}
		double r = 0.0;
		double rf = 0.0;
		for (std::size_t j = 1; j <= trade.increments.size(); ++j) {
			const double p = trade.increments[j - 1];
			r += p;
			rf += p - static_cast<double>(j) * penalty;
		}
		const double excess = r - rf;
		sum += excess;
		sum_sq += excess * excess;
	}
	const auto n = static_cast<double>(ledger.size());
	return {sum / n, std::sqrt(sum_sq / n)};
}

} // namespace

SharpeScore sharpe_ratio(ClosedTradeLedgerView ledger, double penalty, std::size_t set_id) {
	const auto m = excess_moments(ledger, penalty);
	SharpeScore s;
	s.set_id = set_id;
	s.excess_mean = m.mean;
	s.sigma = m.rms;
	s.penalty = penalty;
	if (m.rms > 0.0) {
		s.ratio = m.mean / m.rms;
	}
	return s;
}

SharpeScore volatility_sharpe(ClosedTradeLedgerView ledger, double penalty, double sigma_r, std::size_t set_id) {
	if (!(sigma_r >= 0.0)) {
		throw std::invalid_argument("return volatility must be non-negative");
	}
	const auto m = excess_moments(ledger, penalty);
	SharpeScore s;
	s.set_id = set_id;
	s.excess_mean = m.mean;
	s.sigma = sigma_r;
	s.penalty = penalty;
	if (sigma_r > 0.0) {
		s.ratio = m.mean / sigma_r;
	}
	return s;
}

double skewness(std::span<const double> values) {
	if (values.size() < 3) {
		throw std::invalid_argument("skewness needs at least three values");
	}
	const auto n = static_cast<double>(values.size());
	double mean = 0.0;
	for (double v : values) {
		mean += v;
	}
	mean /= n;
	double m2 = 0.0;
	double m3 = 0.0;
	for (double v : values) {
		const double d = v - mean;
		m2 += d * d;
		m3 += d * d * d;
	}
	m2 /= n;
	m3 /= n;
	// Relative floor: a constant input leaves only rounding noise in m2.
	if (m2 <= 1e-28 * std::max(1.0, mean * mean)) {
		throw std::invalid_argument("skewness of a zero-variance sample");
	}
	return m3 / std::pow(m2, 1.5);
}

std::optional<std::size_t> try_select_optimal(std::span<const SharpeScore> scores) {
	const SharpeScore* best = nullptr;
	for (const auto& s : scores) {
		if (!s.defined()) {
			continue;
		}
		if (best == nullptr || *s.ratio > *best->ratio || (*s.ratio == *best->ratio && s.set_id < best->set_id)) {
			best = &s;
		}
	}
	if (best == nullptr) {
		return std::nullopt;
	}
	return best->set_id;
}

std::size_t select_optimal(std::span<const SharpeScore> scores) {
	if (scores.empty()) {
		throw std::invalid_argument("no scores to select from");
	}
	if (const auto id = try_select_optimal(scores)) {
		return *id;
	}
	throw std::invalid_argument("every Sharpe ratio is undefined");
}

ShadowBook::ShadowBook(std::size_t max_hold, std::size_t window) : max_hold_(max_hold), window_(window) {
	if (max_hold_ == 0 || window_ == 0) {
		throw std::invalid_argument("shadow book needs positive max_hold and window");
	}
	closed_.reserve(window_);
}

void ShadowBook::close() {
	if (closed_.size() == window_) {
		closed_.erase(closed_.begin());
	}
	closed_.push_back(ClosedTrade{std::move(current_)});
	current_.clear();
	++total_closed_;
	side_ = 0;
}

void ShadowBook::on_tick(std::size_t tau, double mid, int signal) {
	if (side_ != 0) {
		current_.push_back(static_cast<double>(side_) * (mid - last_mid_));
		last_mid_ = mid;
		if ((signal != 0 && signal != side_) || tau - open_tau_ >= max_hold_) {
			close();
		}
	}
	if (side_ == 0 && signal != 0) {
		side_ = signal;
		open_tau_ = tau;
		last_mid_ = mid;
	}
}

} // namespace stringmom::eval
