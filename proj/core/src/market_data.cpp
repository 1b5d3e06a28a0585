#include "stringmom/market_data.hpp"

#include "stringmom/error.hpp"

#include <fmt/core.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string_view>

namespace stringmom::data {

TickStream::TickStream(std::vector<TickQuote> quotes, std::string instrument, StreamSource source)
    : quotes_(std::move(quotes)), instrument_(std::move(instrument)), source_(source) {
	if (quotes_.empty()) {
		throw DataError("empty stream");
	}
	for (std::size_t i = 0; i < quotes_.size(); ++i) {
		const auto& q = quotes_[i];
		if (q.index != i) {
			throw DataError(fmt::format("quote indices must be contiguous from 0 (found {} at position {})",
			                            q.index, i));
		}
		if (!(q.bid > 0.0) || !(q.ask > 0.0) || !std::isfinite(q.bid) || !std::isfinite(q.ask)) {
			throw DataError(fmt::format("non-positive price at row {}", i + 1));
		}
		if (q.bid > q.ask || (q.bid == q.ask && source_ != StreamSource::synthetic)) {
			throw DataError(fmt::format("bid ≥ ask at row {}", i + 1));
		}
		locked_ = locked_ || q.bid == q.ask;
		if (i > 0 && q.timestamp < quotes_[i - 1].timestamp) {
			throw DataError(fmt::format("timestamps decrease at row {}", i + 1));
		}
	}
}

std::vector<double> TickStream::mids() const {
	std::vector<double> out;
	out.reserve(quotes_.size());
	for (const auto& q : quotes_) {
		out.push_back(q.mid());
	}
	return out;
}

std::vector<double> TickStream::bids() const {
	std::vector<double> out;
	out.reserve(quotes_.size());
	for (const auto& q : quotes_) {
		out.push_back(q.bid);
	}
	return out;
}

std::vector<double> TickStream::asks() const {
	std::vector<double> out;
	out.reserve(quotes_.size());
	for (const auto& q : quotes_) {
		out.push_back(q.ask);
	}
	return out;
}

namespace {

std::string_view trim(std::string_view s) {
	while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
		s.remove_prefix(1);
	}
	while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
		s.remove_suffix(1);
	}
	return s;
}

bool parse_price(std::string_view field, double& out) {
	field = trim(field);
	if (field.empty()) {
		return false;
	}
	auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
	return ec == std::errc{} && ptr == field.data() + field.size();
}

} // namespace

TickStream parse_ticks(std::istream& in, std::string instrument) {
	std::vector<TickQuote> quotes;
	std::string line;
	std::size_t row = 0;
	bool first_line = true;
	while (std::getline(in, line)) {
		std::string_view view = trim(line);
		if (first_line && view.size() >= 3 && static_cast<unsigned char>(view[0]) == 0xEF) {
			view.remove_prefix(3); // UTF-8 BOM
		}
		if (view.empty()) {
			continue;
		}
		if (first_line) {
			first_line = false;
			if (view.front() < '0' || view.front() > '9') {
				continue; // header row
			}
		}
		++row;
		const auto c1 = view.find(',');
		const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
		if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos) {
			throw DataError(fmt::format("malformed row {}: expected timestamp,bid,ask", row));
		}
		TickQuote q;
		q.index = quotes.size();
		try {
			q.timestamp = parse_timestamp(trim(view.substr(0, c1)));
		} catch (const std::invalid_argument&) {
			throw DataError(fmt::format("malformed row {}: bad timestamp", row));
		}
		if (!parse_price(view.substr(c1 + 1, c2 - c1 - 1), q.bid) || !parse_price(view.substr(c2 + 1), q.ask)) {
			throw DataError(fmt::format("malformed row {}: bad price", row));
		}
		if (!(q.bid > 0.0) || !(q.ask > 0.0)) {
			throw DataError(fmt::format("non-positive price at row {}", row));
		}
		if (q.bid >= q.ask) {
			throw DataError(fmt::format("bid ≥ ask at row {}", row));
		}
		quotes.push_back(q);
	}
	if (quotes.empty()) {
		throw DataError("empty stream");
	}
	return TickStream(std::move(quotes), std::move(instrument), StreamSource::file);
}

TickStream load_ticks(const std::filesystem::path& path, TickFormat format) {
	if (format != TickFormat::csv) {
		throw std::invalid_argument("unsupported tick format");
	}
	std::ifstream in(path);
	if (!in) {
		throw DataError(fmt::format("cannot open tick file '{}'", path.string()));
	}
	return parse_ticks(in);
}

void write_ticks(std::ostream& out, const TickStream& stream) {
	out << "timestamp,bid,ask\n";
	for (const auto& q : stream.quotes()) {
		out << fmt::format("{},{:.6f},{:.6f}\n", format_timestamp(q.timestamp), q.bid, q.ask);
	}
}

TickStream generate_synthetic(std::uint64_t seed, std::size_t n, SyntheticModel model,
                              const SyntheticParams& params) {
	if (n == 0) {
		throw std::invalid_argument("synthetic stream needs n >= 1");
	}
	if (!(params.spread >= 0.0)) {
		throw std::invalid_argument("spread must be non-negative");
	}
	if (!(params.start_price > 0.0)) {
		throw std::invalid_argument("start price must be positive");
	}
	if (!(params.volatility >= 0.0)) {
		throw std::invalid_argument("volatility must be non-negative");
	}
	if (params.tick_interval.count() < 0) {
		throw std::invalid_argument("tick interval must be non-negative");
	}
	if (model == SyntheticModel::sinusoid) {
		if (!(params.period >= 2.0)) {
			throw std::invalid_argument("sinusoid period must be at least 2 ticks");
		}
		if (!(std::abs(params.amplitude) < params.start_price)) {
			throw std::invalid_argument("sinusoid amplitude must be below the start price");
		}
	}

	std::mt19937_64 rng(seed);
	std::normal_distribution<double> normal(0.0, 1.0);
	const double half = 0.5 * params.spread;

	std::vector<TickQuote> quotes;
	quotes.reserve(n);
	double mid = params.start_price;
	for (std::size_t t = 0; t < n; ++t) {
		const double noise = params.volatility > 0.0 ? params.volatility * normal(rng) : 0.0;
		switch (model) {
		case SyntheticModel::random_walk:
			if (t > 0) {
				mid += noise;
			}
			break;
		case SyntheticModel::random_walk_drift:
			if (t > 0) {
				mid += params.drift + noise;
			}
			break;
		case SyntheticModel::sinusoid:
			mid = params.start_price +
			      params.amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / params.period) +
			      (t > 0 ? noise : 0.0);
			break;
		}
		if (!(mid - half > 0.0)) {
			throw std::invalid_argument(
			    fmt::format("synthetic prices become non-positive at tick {}; reduce volatility or drift", t));
		}
		TickQuote q;
		q.index = t;
		q.timestamp = params.start_time + params.tick_interval * static_cast<std::int64_t>(t);
		q.bid = mid - half;
		q.ask = mid + half;
		quotes.push_back(q);
	}
	return TickStream(std::move(quotes), params.instrument, StreamSource::synthetic);
}

TickStream with_spread(const TickStream& stream, double spread) {
	if (!(spread >= 0.0)) {
		throw std::invalid_argument("spread must be non-negative");
	}
	std::vector<TickQuote> quotes(stream.quotes().begin(), stream.quotes().end());
	for (auto& q : quotes) {
		const double mid = q.mid();
		q.bid = mid - 0.5 * spread;
		q.ask = mid + 0.5 * spread;
	}
	// Widened streams are derived data; zero spread is allowed as for synthetic input.
	return TickStream(std::move(quotes), stream.instrument(), StreamSource::synthetic);
}

std::size_t BinnedHistogram::total() const {
	std::size_t sum = 0;
	for (const auto& [bin, count] : counts) {
		sum += count;
	}
	return sum;
}

std::int64_t bin_of(double value, double bin_width) {
	return static_cast<std::int64_t>(std::floor(value / bin_width + 1e-6));
}

BinnedHistogram spread_histogram(const TickStream& stream, double bin_width) {
	if (!(bin_width > 0.0)) {
		throw std::invalid_argument("bin width must be positive");
	}
	BinnedHistogram hist;
	hist.bin_width = bin_width;
	for (const auto& q : stream.quotes()) {
		++hist.counts[bin_of(q.spread(), bin_width)];
	}
	return hist;
}

DayHistogram trades_per_day_histogram(std::span<const TradePosition> closed, const DayCalendar& calendar) {
	DayHistogram hist;
	for (const auto& pos : closed) {
		if (pos.status != PositionStatus::closed) {
			throw std::invalid_argument(fmt::format("position {} has no close timestamp", pos.id));
		}
		++hist[calendar(pos.close_time)];
	}
	return hist;
}

void write_histogram_csv(std::ostream& out, const BinnedHistogram& hist) {
	out << "bin_lower,count\n";
	for (const auto& [bin, count] : hist.counts) {
		out << fmt::format("{:.10g},{}\n", hist.lower(bin), count);
	}
}

void write_histogram_csv(std::ostream& out, const DayHistogram& hist) {
	out << "bin_lower,count\n";
	for (const auto& [day, count] : hist) {
		out << fmt::format("{},{}\n", format_day(day), count);
	}
}

} // namespace stringmom::data
