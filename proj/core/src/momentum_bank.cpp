#include "stringmom/momentum_bank.hpp"

#include "detail/power.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace stringmom::strings {

namespace {

// Four interleaved accumulators; the serial dependency chain of a plain loop
// dominates the cost of the whole evaluation otherwise.
double sum(std::span<const double> v) {
	double a0 = 0.0;
	double a1 = 0.0;
	double a2 = 0.0;
	double a3 = 0.0;
	std::size_t i = 0;
	for (; i + 4 <= v.size(); i += 4) {
		a0 += v[i];
		a1 += v[i + 1];
		a2 += v[i + 2];
		a3 += v[i + 3];
	}
	for (; i < v.size(); ++i) {
		a0 += v[i];
	}
	return (a0 + a1) + (a2 + a3);
}

bool same_pattern(const StringParams& a, const StringParams& b) {
	return a.function == b.function && a.frequency == b.frequency && a.phase == b.phase;
}

} // namespace

MomentumBank::MomentumBank(std::vector<StringParams> sets) : sets_(std::move(sets)) {
	if (sets_.empty()) {
		throw std::invalid_argument("momentum bank needs at least one parameter set");
	}
	for (std::size_t i = 0; i < sets_.size(); ++i) {
		const auto& p = sets_[i];
		validate(p);
		max_length_ = std::max(max_length_, p.length);

		auto lg = std::find_if(groups_.begin(), groups_.end(), [&](const LengthGroup& g) { return g.length == p.length; });
		if (lg == groups_.end()) {
			groups_.push_back(LengthGroup{p.length, {}});
			lg = std::prev(groups_.end());
		}
		auto pg = std::find_if(lg->patterns.begin(), lg->patterns.end(), [&](const PatternGroup& g) {
			return same_pattern(sets_[g.members.front().set], p);
		});
		if (pg == lg->patterns.end()) {
			lg->patterns.push_back(PatternGroup{regular_pattern(p), {}, 0});
			pg = std::prev(lg->patterns.end());
		}
		Member m;
		m.set = i;
		m.exponent = p.exponent;
		if (const auto q = detail::integral_exponent(p.exponent)) {
			m.integral = *q;
			pg->ladder_levels = std::max<std::size_t>(pg->ladder_levels, std::bit_width(*q));
		}
		pg->members.push_back(m);
	}
}

void MomentumBank::evaluate(std::span<const double> prices, std::size_t end, std::span<MomentumSample> out,
                            Workspace& ws) const {
	if (out.size() != sets_.size()) {
		throw std::invalid_argument("momentum output span has the wrong size");
	}
	if (end >= prices.size()) {
		throw std::invalid_argument("window end beyond the price series");
	}
	for (const auto& group : groups_) {
		const std::size_t n = group.length + 1;
		if (end < group.length) {
			for (const auto& pg : group.patterns) {
				for (const auto& m : pg.members) {
					out[m.set] = MomentumSample{};
				}
			}
			continue;
		}
		const auto window = prices.subspan(end - group.length, n);
		const auto [lo_it, hi_it] = std::minmax_element(window.begin(), window.end());
		const double lo = *lo_it;
		const double range = *hi_it - lo;
		const bool degenerate = range == 0.0;

		ws.standardized.resize(n);
		if (degenerate) {
			std::fill(ws.standardized.begin(), ws.standardized.end(), 0.5);
		} else {
			for (std::size_t h = 0; h < n; ++h) {
				ws.standardized[h] = (window[h] - lo) / range;
			}
		}

		for (const auto& pg : group.patterns) {
			ws.deviation.resize(n);
			for (std::size_t h = 0; h < n; ++h) {
				ws.deviation[h] = std::abs(ws.standardized[h] - pg.pattern[h]);
			}
			// ladder[k][h] = deviation[h]^(2^k)
			if (ws.ladder.size() < pg.ladder_levels) {
				ws.ladder.resize(pg.ladder_levels);
			}
			for (std::size_t k = 1; k < pg.ladder_levels; ++k) {
				const auto& prev = k == 1 ? ws.deviation : ws.ladder[k - 1];
				auto& cur = ws.ladder[k];
				cur.resize(n);
				for (std::size_t h = 0; h < n; ++h) {
					cur[h] = prev[h] * prev[h];
				}
			}
			auto level = [&](std::size_t k) -> const std::vector<double>& {
				return k == 0 ? ws.deviation : ws.ladder[k];
			};

			for (const auto& m : pg.members) {
				double total = 0.0;
				if (m.integral != 0) {
					if (std::has_single_bit(m.integral)) {
						total = sum(level(static_cast<std::size_t>(std::countr_zero(m.integral))));
					} else {
						ws.product.assign(n, 1.0);
						for (std::size_t k = 0; k < pg.ladder_levels; ++k) {
							if ((m.integral >> k) & 1U) {
								const auto& lv = level(k);
								for (std::size_t h = 0; h < n; ++h) {
									ws.product[h] *= lv[h];
								}
							}
						}
						total = sum(ws.product);
					}
				} else {
					ws.product.resize(n);
					for (std::size_t h = 0; h < n; ++h) {
						ws.product[h] = std::pow(ws.deviation[h], m.exponent);
					}
					total = sum(ws.product);
				}
				const double mean = total / static_cast<double>(n);
				const double value = m.exponent == 1.0 ? mean : std::pow(mean, 1.0 / m.exponent);
				out[m.set] = MomentumSample{std::clamp(value, 0.0, 1.0), degenerate, true};
			}
		}
	}
}

} // namespace stringmom::strings
