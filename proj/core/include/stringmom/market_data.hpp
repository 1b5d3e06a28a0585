#pragma once

#include "stringmom/position.hpp"
#include "stringmom/time.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace stringmom::data {

struct TickQuote {
	std::size_t index = 0;
	Timestamp timestamp{};
	double bid = 0.0;
	double ask = 0.0;

	double mid() const { return 0.5 * (bid + ask); }
	double spread() const { return ask - bid; }
};

enum class StreamSource { file, synthetic };

/**
 * Immutable, validated sequence of quotes.
 *
 * Indices are contiguous from 0 and timestamps non-decreasing. Every quote has
 * bid < ask, except that synthetic streams may carry locked quotes
 * (bid == ask) when generated with zero spread; has_locked_quotes() reports
 * that case.
 */
class TickStream {
public:
	TickStream(std::vector<TickQuote> quotes, std::string instrument, StreamSource source);

	std::span<const TickQuote> quotes() const { return quotes_; }
	const TickQuote& operator[](std::size_t i) const { return quotes_[i]; }
	std::size_t size() const { return quotes_.size(); }
	const std::string& instrument() const { return instrument_; }
	StreamSource source() const { return source_; }
	bool has_locked_quotes() const { return locked_; }

	std::vector<double> mids() const;
	std::vector<double> bids() const;
	std::vector<double> asks() const;

private:
	std::vector<TickQuote> quotes_;
	std::string instrument_;
	StreamSource source_;
	bool locked_ = false;
};

enum class TickFormat { csv };

/// Reads `timestamp,bid,ask` rows; a leading header row is skipped. Throws
/// DataError naming the 1-based data row on malformed or crossed quotes.
TickStream load_ticks(const std::filesystem::path& path, TickFormat format = TickFormat::csv);
TickStream parse_ticks(std::istream& in, std::string instrument = "EUR/USD");

/// Writes with a header row and six fractional digits per price.
void write_ticks(std::ostream& out, const TickStream& stream);

enum class SyntheticModel { random_walk, random_walk_drift, sinusoid };

struct SyntheticParams {
	double start_price = 1.3;
	double volatility = 0.0; // per-tick N(0, vol^2) step (noise for sinusoid)
	double drift = 0.0;      // random_walk_drift only
	double amplitude = 0.0;  // sinusoid only
	double period = 100.0;   // sinusoid only, in ticks
	double spread = 0.0002;
	std::chrono::milliseconds tick_interval{1000};
	Timestamp start_time = std::chrono::sys_days{std::chrono::year{2010} / 7 / 15};
	std::string instrument = "EUR/USD";
};

/**
 * Deterministic synthetic quotes. Mid-price models:
 *   random_walk:        mid(0) = start, mid(t) = mid(t-1) + vol * z(t)
 *   random_walk_drift:  mid(t) = mid(t-1) + drift + vol * z(t)
 *   sinusoid:           mid(t) = start + amplitude * sin(2 pi t / period) + vol * z(t)
 * with z ~ N(0, 1) from a 64-bit Mersenne twister seeded with `seed`.
 * bid = mid - spread/2, ask = mid + spread/2. Parameterizations that drive a
 * bid to zero or below are rejected with std::invalid_argument.
 */
TickStream generate_synthetic(std::uint64_t seed, std::size_t n, SyntheticModel model,
                              const SyntheticParams& params);

/// Same mids, spread replaced symmetrically by `spread` (>= 0).
TickStream with_spread(const TickStream& stream, double spread);

/// Fixed-width bins; key k covers [k * bin_width, (k + 1) * bin_width).
struct BinnedHistogram {
	double bin_width = 0.0;
	std::map<std::int64_t, std::size_t> counts;

	double lower(std::int64_t bin) const { return static_cast<double>(bin) * bin_width; }
	std::size_t total() const;
};

/// Bin index of `value`. Values within 1e-6 of a bin width below an edge snap
/// to the upper bin, so decimal spreads such as 0.0003 land where written.
std::int64_t bin_of(double value, double bin_width);

BinnedHistogram spread_histogram(const TickStream& stream, double bin_width);

using DayCalendar = std::function<std::chrono::sys_days(Timestamp)>;
using DayHistogram = std::map<std::chrono::sys_days, std::size_t>;

/// Closed positions per calendar day of their close timestamp.
DayHistogram trades_per_day_histogram(std::span<const TradePosition> closed,
                                      const DayCalendar& calendar = utc_day);

void write_histogram_csv(std::ostream& out, const BinnedHistogram& hist);
void write_histogram_csv(std::ostream& out, const DayHistogram& hist);

} // namespace stringmom::data
