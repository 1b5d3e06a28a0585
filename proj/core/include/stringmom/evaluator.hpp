#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace stringmom::eval {

/// One closed position as seen by the scorer: its per-tick PnL increments
/// p_1..p_T over the ticks it was open.
struct ClosedTrade {
	std::vector<double> increments;

	std::size_t accepted() const { return increments.size(); }
};

/// N closed positions; each must carry at least one increment.
using ClosedTradeLedgerView = std::span<const ClosedTrade>;

struct SharpeScore {
	std::size_t set_id = 0;
	double excess_mean = 0.0; // E(R - R_f)
	double sigma = 0.0;
	std::optional<double> ratio; // empty when the denominator is zero
	double penalty = 0.0;

	bool defined() const { return ratio.has_value(); }
};

/**
 * Penalized Sharpe ratio of a ledger:
 *
 *   R_i   = sum_j p_j
 *   Rf_i  = sum_j (p_j - j * P)
 *   E     = mean_i (R_i - Rf_i)
 *   sigma = sqrt(mean_i (R_i - Rf_i)^2)
 *   ratio = E / sigma
 *
 * R_i - Rf_i reduces to P * T_i (T_i + 1) / 2, so the score depends on the
 * holding times only. A zero penalty leaves the ratio undefined. Throws
 * std::invalid_argument on an empty ledger, a trade with no increments, or
 * a negative penalty.
 */
SharpeScore sharpe_ratio(ClosedTradeLedgerView ledger, double penalty, std::size_t set_id = 0);

/// As sharpe_ratio with the return volatility sigma_r as the denominator.
SharpeScore volatility_sharpe(ClosedTradeLedgerView ledger, double penalty, double sigma_r,
                              std::size_t set_id = 0);

/// Population skewness m3 / m2^(3/2). Throws std::invalid_argument for fewer
/// than three values or zero variance.
double skewness(std::span<const double> values);

/// Highest defined ratio, lowest set_id on ties. Throws std::invalid_argument
/// when no score is defined.
std::size_t select_optimal(std::span<const SharpeScore> scores);
std::optional<std::size_t> try_select_optimal(std::span<const SharpeScore> scores);

/**
 * Virtually trades one parameter set's signal so it can be scored on its own.
 *
 * At most one virtual position is open. It opens on a nonzero signal,
 * accrues mid-price increments each tick, and closes when the signal turns
 * against it or it has been held `max_hold` ticks. The most recent `window`
 * closed trades are retained.
 */
class ShadowBook {
public:
	ShadowBook(std::size_t max_hold, std::size_t window);

	void on_tick(std::size_t tau, double mid, int signal);

	std::span<const ClosedTrade> closed() const { return closed_; }
	std::size_t total_closed() const { return total_closed_; }
	bool in_position() const { return side_ != 0; }

private:
	void close();

	std::size_t max_hold_;
	std::size_t window_;
	std::vector<ClosedTrade> closed_;
	std::size_t total_closed_ = 0;
	int side_ = 0;
	std::size_t open_tau_ = 0;
	double last_mid_ = 0.0;
	std::vector<double> current_;
};

} // namespace stringmom::eval
