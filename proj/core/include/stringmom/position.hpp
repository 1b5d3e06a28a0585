#pragma once

#include "stringmom/time.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace stringmom {

enum class Side { long_side, short_side };

constexpr int direction(Side side) {
	return side == Side::long_side ? 1 : -1;
}

constexpr std::string_view to_string(Side side) {
	return side == Side::long_side ? "long" : "short";
}

enum class PositionStatus { open, closed };

/// A long position opens at the ask and closes at the bid; a short opens at
/// the bid and closes at the ask.
struct TradePosition {
	std::uint64_t id = 0;
	Side side = Side::long_side;
	std::int64_t units = 0;
	std::size_t open_tau = 0;
	std::size_t close_tau = 0;
	Timestamp open_time{};
	Timestamp close_time{};
	double open_price = 0.0;
	double close_price = 0.0;
	double realized_pnl = 0.0;
	PositionStatus status = PositionStatus::open;

	/// Liquidation value of an open position against the given quote.
	double mark_to_market(double bid, double ask) const {
		return side == Side::long_side ? (bid - open_price) * static_cast<double>(units)
		                               : (open_price - ask) * static_cast<double>(units);
	}
};

} // namespace stringmom
