#pragma once

#include "stringmom/string_core.hpp"

#include <boost/multi_index/identity.hpp>
#include <boost/multi_index/ranked_index.hpp>
#include <boost/multi_index/sequenced_index.hpp>
#include <boost/multi_index_container.hpp>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace stringmom::predict {

struct Band {
	double lo = 0.3;
	double hi = 0.4;

	bool contains(double v) const { return v >= lo && v <= hi; }
};

enum class BandMode {
	fixed,           // band stays at the initial value
	rolling_quantile // band tracks [q_lo, q_hi] of the recent momenta
};

struct PredictorConfig {
	std::size_t warmup = 500;       // momenta observed before any signal
	std::size_t band_window = 5000; // rolling history length
	double lo_quantile = 0.30;
	double hi_quantile = 0.40;
	Band initial_band{};
	BandMode mode = BandMode::rolling_quantile;
};

void validate(const PredictorConfig& cfg);

/// Sign of the mid-price change over the lookback, in {-1, 0, +1}.
int slope_direction(double now, double before);

/**
 * Momentum-to-command rule for one parameter set.
 *
 * A momentum inside the learned band fires in the direction of the recent
 * price slope; anything else abstains. Nothing fires until `warmup`
 * non-degenerate momenta have been seen. In rolling mode the band is
 * re-estimated after every observation from the last `band_window` momenta
 * (linear-interpolated quantiles); a collapsed estimate keeps the old band.
 */
class PredictorState {
public:
	explicit PredictorState(strings::StringParams params, PredictorConfig cfg = {});

	/// Returns -1, 0 or +1. Throws std::invalid_argument when the momentum was
	/// produced with other parameters or the hint is out of {-1, 0, +1}.
	int update_and_signal(const strings::MomentumRecord& m, int direction_hint);

	/// Same rule on a raw value, for hot loops that already know the params.
	int update_and_signal(double value, bool degenerate, int direction_hint);

	const strings::StringParams& params() const { return params_; }
	const PredictorConfig& config() const { return cfg_; }
	Band band() const { return band_; }
	bool warmed_up() const { return observed_ >= cfg_.warmup; }
	std::size_t observed() const { return observed_; }

	/// Recent momenta, oldest first.
	std::vector<double> history() const;

private:
	double quantile(double q) const;

	using History = boost::multi_index::multi_index_container<
	    double, boost::multi_index::indexed_by<boost::multi_index::sequenced<>,
	                                           boost::multi_index::ranked_non_unique<boost::multi_index::identity<double>>>>;

	strings::StringParams params_;
	PredictorConfig cfg_;
	History history_;
	Band band_;
	std::size_t observed_ = 0;
};

/// One tick's per-set predictions and their mean.
struct TradeCommand {
	std::size_t tau = 0;
	std::vector<int> per_set;
	double summary = 0.0;
};

/// summary = mean(per_set). Throws on an empty input or values outside {-1, 0, +1}.
TradeCommand aggregate(std::span<const int> per_set, std::size_t tau = 0);

/// Equal-width histogram on [0, 1]; 1.0 falls in the last bin.
struct UnitHistogram {
	std::vector<double> mass;

	std::size_t bins() const { return mass.size(); }
	double lower(std::size_t bin) const { return static_cast<double>(bin) / static_cast<double>(mass.size()); }
};

/// Streaming counterpart used by long runs.
class UnitHistogramCounter {
public:
	explicit UnitHistogramCounter(std::size_t bins);

	void add(double value);
	void merge(const UnitHistogramCounter& other);
	std::size_t total() const { return total_; }
	std::span<const std::size_t> counts() const { return counts_; }
	UnitHistogram normalized() const;

private:
	std::vector<std::size_t> counts_;
	std::size_t total_ = 0;
};

/// Normalized histograms of incoming (all) and outgoing (signal-producing)
/// momenta. An empty input yields all-zero mass.
std::pair<UnitHistogram, UnitHistogram> momentum_histograms(std::span<const double> incoming,
                                                            std::span<const double> outgoing,
                                                            std::size_t bins);

void write_histogram_csv(std::ostream& out, const UnitHistogram& hist);

} // namespace stringmom::predict
