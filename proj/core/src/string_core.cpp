#include "stringmom/string_core.hpp"

#include "detail/power.hpp"
#include "stringmom/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stringmom::strings {

std::string_view to_string(PatternFunction f) {
	switch (f) {
	case PatternFunction::cos:
		return "cos";
	case PatternFunction::sin:
		return "sin";
	case PatternFunction::sinh_norm:
		return "sinh";
	case PatternFunction::cosh_norm:
		return "cosh";
	}
	return "?";
}

PatternFunction pattern_function_from_string(std::string_view name) {
	if (name == "cos") {
		return PatternFunction::cos;
	}
	if (name == "sin") {
		return PatternFunction::sin;
	}
	if (name == "sinh" || name == "sinh_norm") {
		return PatternFunction::sinh_norm;
	}
	if (name == "cosh" || name == "cosh_norm") {
		return PatternFunction::cosh_norm;
	}
	throw std::invalid_argument(fmt::format("unknown pattern function '{}'", name));
}

void validate(const StringParams& params) {
	if (params.length < 1) {
		throw std::invalid_argument("string length must be at least 1");
	}
	if (!(params.exponent > 0.0) || !std::isfinite(params.exponent)) {
		throw std::invalid_argument("momentum exponent must be positive");
	}
	if (!std::isfinite(params.phase)) {
		throw std::invalid_argument("phase must be finite");
	}
}

std::string describe(const StringParams& params) {
	return fmt::format("l_s={} m={} Q={:g} func={} phase={:g}", params.length, params.frequency,
	                   params.exponent, to_string(params.function), params.phase);
}

StandardizedWindow standardize_window(std::span<const double> prices, std::size_t length) {
	if (length < 1 || prices.size() != length + 1) {
		throw std::invalid_argument(
		    fmt::format("window needs length + 1 = {} prices, got {}", length + 1, prices.size()));
	}
	StandardizedWindow w;
	const auto [lo, hi] = std::minmax_element(prices.begin(), prices.end());
	w.min = *lo;
	w.max = *hi;
	w.values.resize(prices.size());
	if (w.max == w.min) {
		w.degenerate = true;
		std::fill(w.values.begin(), w.values.end(), 0.5);
		return w;
	}
	const double range = w.max - w.min;
	for (std::size_t h = 0; h < prices.size(); ++h) {
		w.values[h] = (prices[h] - w.min) / range;
	}
	return w;
}

namespace {

double pattern_angle(const StringParams& params, std::size_t h) {
	return 2.0 * std::numbers::pi * static_cast<double>(params.frequency) * static_cast<double>(h) /
	           static_cast<double>(params.length + 1) +
	       params.phase;
}

// Largest |phi~| over h in [0, length]; phi~ is affine in h so an end point wins.
double max_abs_angle(const StringParams& params) {
	return std::max(std::abs(pattern_angle(params, 0)), std::abs(pattern_angle(params, params.length)));
}

double pattern_value(const StringParams& params, double angle, double max_angle) {
	switch (params.function) {
	case PatternFunction::cos:
		return 0.5 * (1.0 + std::cos(angle));
	case PatternFunction::sin:
		return 0.5 * (1.0 + std::sin(angle));
	case PatternFunction::sinh_norm: {
		const double denom = std::sinh(max_angle);
		return denom == 0.0 ? 0.5 : 0.5 * (1.0 + std::sinh(angle) / denom);
	}
	case PatternFunction::cosh_norm:
		return 0.5 * (1.0 + std::cosh(angle) / std::cosh(max_angle));
	}
	return 0.0;
}

} // namespace

double regular_function(const StringParams& params, std::size_t h) {
	if (h > params.length) {
		throw std::invalid_argument(fmt::format("pattern offset {} outside [0, {}]", h, params.length));
	}
	return pattern_value(params, pattern_angle(params, h), max_abs_angle(params));
}

std::vector<double> regular_pattern(const StringParams& params) {
	validate(params);
	const double max_angle = max_abs_angle(params);
	std::vector<double> out(params.length + 1);
	for (std::size_t h = 0; h <= params.length; ++h) {
		out[h] = pattern_value(params, pattern_angle(params, h), max_angle);
	}
	return out;
}

double power_mean(std::span<const double> deviations, double exponent) {
	if (deviations.empty()) {
		throw std::invalid_argument("power mean of an empty sequence");
	}
	double sum = 0.0;
	if (const auto q = detail::integral_exponent(exponent)) {
		for (double d : deviations) {
			sum += detail::ipow(d, *q);
		}
	} else {
		for (double d : deviations) {
			sum += std::pow(d, exponent);
		}
	}
	const double mean = sum / static_cast<double>(deviations.size());
	return exponent == 1.0 ? mean : std::pow(mean, 1.0 / exponent);
}

MomentumRecord string_momentum(std::span<const double> prices, const StringParams& params, std::size_t tau) {
	validate(params);
	for (double p : prices) {
		if (!(p > 0.0)) {
			throw std::invalid_argument("momentum window prices must be positive");
		}
	}
	const auto window = standardize_window(prices, params.length);
	const auto pattern = regular_pattern(params);
	std::vector<double> deviations(window.values.size());
	for (std::size_t h = 0; h < deviations.size(); ++h) {
		deviations[h] = std::abs(window.values[h] - pattern[h]);
	}
	MomentumRecord rec;
	rec.tau = tau;
	rec.params = params;
	rec.value = std::clamp(power_mean(deviations, params.exponent), 0.0, 1.0);
	rec.degenerate = window.degenerate;
	return rec;
}

double return_volatility(std::span<const double> prices, std::size_t length) {
	if (length == 0 || length % 2 != 0) {
		throw std::invalid_argument("return volatility needs an even positive string length");
	}
	const std::size_t half = length / 2;
	if (prices.size() < half + 1) {
		throw std::invalid_argument(
		    fmt::format("return volatility needs {} prices, got {}", half + 1, prices.size()));
	}
	double r1 = 0.0;
	double r2 = 0.0;
	for (std::size_t h = 1; h <= half; ++h) {
		if (prices[h] == 0.0 || prices[h - 1] == 0.0) {
			throw std::invalid_argument("zero price in volatility window");
		}
		const double r = (prices[h] - prices[h - 1]) / prices[h];
		r1 += r;
		r2 += r * r;
	}
	const double radicand = r2 - r1 * r1;
	if (radicand < -1e-12) {
		throw NumericError(fmt::format("negative return-volatility radicand {:.3e}", radicand));
	}
	return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

EndpointMaps two_endpoint_maps(std::span<const double> prices, std::size_t length, double q) {
	if (length < 1 || prices.size() != length + 1) {
		throw std::invalid_argument(
		    fmt::format("window needs length + 1 = {} prices, got {}", length + 1, prices.size()));
	}
	if (!(q > 0.0)) {
		throw std::invalid_argument("map exponent q must be positive");
	}
	const double first = prices.front();
	const double last = prices.back();
	if (!(first > 0.0) || !(last > 0.0)) {
		throw std::invalid_argument("end-point prices must be positive");
	}
	EndpointMaps maps;
	maps.map.resize(length + 1);
	maps.conjugate.resize(length + 1);
	double running = 0.0;
	for (std::size_t h = 0; h <= length; ++h) {
		const double product = (prices[h] / first - 1.0) * (prices[h] / last - 1.0);
		maps.map[h] = q == 1.0 ? std::abs(product) : std::pow(std::abs(product), q);
		running += maps.map[h];
		maps.conjugate[h] = running / static_cast<double>(h + 1);
	}
	return maps;
}

} // namespace stringmom::strings
