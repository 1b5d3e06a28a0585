#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stringmom::strings {

/// Reference pattern family for the momentum. The hyperbolic variants are
/// divided by their largest magnitude on the window so every variant stays
/// within [0, 1].
enum class PatternFunction { cos, sin, sinh_norm, cosh_norm };

std::string_view to_string(PatternFunction f);
/// Accepts cos, sin, sinh, cosh, sinh_norm and cosh_norm.
PatternFunction pattern_function_from_string(std::string_view name);

/// One momentum-predictor parameterization.
struct StringParams {
	std::size_t length = 900; // l_s, ticks; a window holds length + 1 prices
	unsigned frequency = 1;   // m
	double exponent = 1.0;    // Q, any positive real
	PatternFunction function = PatternFunction::cos;
	double phase = 0.0;       // radians

	bool operator==(const StringParams&) const = default;
};

/// Throws std::invalid_argument unless length >= 1 and exponent > 0.
void validate(const StringParams& params);

std::string describe(const StringParams& params);

struct StandardizedWindow {
	std::vector<double> values;
	double min = 0.0;
	double max = 0.0;
	bool degenerate = false;
};

/// Min-max maps a window of `length + 1` prices into [0, 1]. A flat window is
/// marked degenerate and standardizes to 0.5 everywhere.
StandardizedWindow standardize_window(std::span<const double> prices, std::size_t length);

/// F(h) = (1 + g(phi~)) / 2 with phi~ = 2 pi m h / (length + 1) + phase.
double regular_function(const StringParams& params, std::size_t h);

/// regular_function for h = 0..length.
std::vector<double> regular_pattern(const StringParams& params);

struct MomentumRecord {
	std::size_t tau = 0; // index of the first tick of the window
	StringParams params;
	double value = 0.0;
	bool degenerate = false; // flat window; carries no signal
};

/**
 * String momentum of one window:
 *
 *   M = ( 1/(l_s+1) * sum_h |p_stand(h) - F(h)|^Q )^(1/Q)
 *
 * over h = 0..l_s. The result lies in [0, 1]. Degenerate windows are still
 * evaluated (against the all-0.5 standardization) but flagged.
 */
MomentumRecord string_momentum(std::span<const double> prices, const StringParams& params,
                               std::size_t tau = 0);

/// (mean_h d_h^Q)^(1/Q). Integer exponents use exact repeated multiplication.
double power_mean(std::span<const double> deviations, double exponent);

/**
 * Return volatility over the first length/2 returns of `prices`:
 *
 *   sigma_r = sqrt(r_2 - r_1^2),  r_k = sum_{h=1}^{length/2} ((p(h) - p(h-1)) / p(h))^k
 *
 * The sums are not divided by the count, so the radicand can be negative on
 * trending windows. A radicand in [-1e-12, 0) clamps to zero; below that a
 * NumericError is thrown.
 */
double return_volatility(std::span<const double> prices, std::size_t length);

/// Two-end-point string map P and its smoothed conjugate X over one window.
struct EndpointMaps {
	std::vector<double> map;       // P(h)
	std::vector<double> conjugate; // X(h)
};

/**
 * P(h) = |(p(h)/p(0) - 1) * (p(h)/p(l_s) - 1)|^q and X(h) = mean of P(0..h),
 * for h = 0..l_s. Both end points of P are exactly zero.
 */
EndpointMaps two_endpoint_maps(std::span<const double> prices, std::size_t length, double q);

} // namespace stringmom::strings
