#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace stringmom {

/// UTC instant with millisecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Parses `YYYY-MM-DDTHH:MM:SS[.fff]Z`. Fractions longer than three digits
/// are truncated to milliseconds. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS.sssZ`.
std::string format_timestamp(Timestamp ts);

/// `YYYY-MM-DD`.
std::string format_day(std::chrono::sys_days day);

inline std::chrono::sys_days utc_day(Timestamp ts) {
	return std::chrono::floor<std::chrono::days>(ts);
}

} // namespace stringmom
