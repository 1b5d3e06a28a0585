#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace stringmom::detail {

/// The exponent as an integer when it is one (and small enough to square up).
inline std::optional<std::uint32_t> integral_exponent(double q) {
	if (q >= 1.0 && q <= 1024.0 && std::floor(q) == q) {
		return static_cast<std::uint32_t>(q);
	}
	return std::nullopt;
}

inline double ipow(double base, std::uint32_t exp) {
	double result = 1.0;
	while (exp > 0) {
		if (exp & 1U) {
			result *= base;
		}
		exp >>= 1U;
		if (exp > 0) {
			base *= base;
		}
	}
	return result;
}

} // namespace stringmom::detail
