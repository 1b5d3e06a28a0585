#pragma once

#include "stringmom/string_core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stringmom::strings {

struct MomentumSample {
	double value = 0.0;
	bool degenerate = false;
	bool ready = false; // false until the stream holds a full window
};

/**
 * Evaluates many StringParams on the same tick at once.
 *
 * Sets sharing a length share one standardized window; sets sharing a
 * pattern (function, frequency, phase) share the deviation vector and a
 * ladder of squared powers, so an integral exponent costs one extra pass at
 * most. Results match string_momentum up to floating-point summation order.
 */
class MomentumBank {
public:
	/// Per-thread scratch buffers.
	struct Workspace {
		std::vector<double> standardized;
		std::vector<double> deviation;
		std::vector<std::vector<double>> ladder;
		std::vector<double> product;
	};

	explicit MomentumBank(std::vector<StringParams> sets);

	std::size_t size() const { return sets_.size(); }
	const StringParams& params(std::size_t i) const { return sets_[i]; }
	std::span<const StringParams> sets() const { return sets_; }
	std::size_t max_length() const { return max_length_; }

	/// Fills out[i] for the window of set i ending at prices[end] (inclusive).
	void evaluate(std::span<const double> prices, std::size_t end, std::span<MomentumSample> out,
	              Workspace& ws) const;

private:
	struct Member {
		std::size_t set = 0;
		double exponent = 1.0;
		std::uint32_t integral = 0; // 0 when the exponent is not an integer
	};
	struct PatternGroup {
		std::vector<double> pattern;
		std::vector<Member> members;
		std::size_t ladder_levels = 0;
	};
	struct LengthGroup {
		std::size_t length = 0;
		std::vector<PatternGroup> patterns;
	};

	std::vector<StringParams> sets_;
	std::vector<LengthGroup> groups_;
	std::size_t max_length_ = 0;
};

} // namespace stringmom::strings
