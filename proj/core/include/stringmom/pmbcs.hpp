#pragma once

#include "stringmom/backtester.hpp"
#include "stringmom/evaluator.hpp"
#include "stringmom/market_data.hpp"
#include "stringmom/predictor.hpp"
#include "stringmom/string_core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace stringmom::pmbcs {

enum class ScoreMethod {
	sharpe,           // denominator: RMS of the excess returns
	return_volatility // denominator: sigma_r over the last l_s/2 returns
};

struct EvaluatorConfig {
	double penalty = 1e-5;          // P, price units per tick
	ScoreMethod method = ScoreMethod::sharpe;
	std::size_t eval_interval = 500; // ticks between re-scoring
	std::size_t score_window = 100;  // closed shadow trades kept per set
	std::optional<double> min_sharpe;       // trade gate on the optimal set
	std::optional<double> max_abs_skewness; // trade gate on its momenta
};

void validate(const EvaluatorConfig& cfg);

struct PmbcsConfig {
	std::vector<strings::StringParams> sets;
	bool self_learning = false;
	predict::PredictorConfig predictor;
	EvaluatorConfig evaluator;
	std::size_t shadow_max_hold = 1800;
	std::size_t momentum_bins = 20;
	unsigned threads = 0; // 0: hardware concurrency
};

struct EvaluationPoint {
	std::size_t tau = 0;
	std::vector<eval::SharpeScore> scores;
	std::vector<std::optional<double>> skewness; // filled only when gated on it
	std::optional<std::size_t> optimal;          // carried over when no score is defined
};

/// Everything the trading pass needs, computed from prices alone.
struct PredictionTrace {
	std::size_t ticks = 0;
	std::size_t sets = 0;
	std::vector<std::int8_t> signals; // tick-major: signals[t * sets + i]
	std::vector<EvaluationPoint> evaluations;
	std::vector<eval::SharpeScore> final_scores;
	predict::UnitHistogramCounter incoming{20};
	predict::UnitHistogramCounter outgoing{20};
	std::size_t degenerate_windows = 0;

	int signal(std::size_t tau, std::size_t set) const { return signals[tau * sets + set]; }
};

/**
 * Runs every parameter set over the stream.
 *
 * Per tick and set: momentum of the window ending at the tick, band rule with
 * the slope over the last l_s/2 ticks as direction, virtual shadow trade of
 * the resulting signal. Every eval_interval ticks each set is scored on its
 * recent shadow trades and the best defined score becomes the optimal set.
 * Momenta are computed in parallel blocks; the result does not depend on the
 * thread count.
 */
PredictionTrace predict_stream(const data::TickStream& stream, const PmbcsConfig& cfg);

/**
 * PMBCS as a backtest strategy.
 *
 * The simple model (one set) trades its own signal. The self-learning model
 * aggregates all sets into the summary and opens only when the current
 * optimal set fires in the summary's direction (and passes the optional
 * Sharpe and skewness gates); closes follow the summary as for any strategy.
 */
class PmbcsStrategy final : public backtest::Strategy {
public:
	PmbcsStrategy(const data::TickStream& stream, PmbcsConfig cfg);

	backtest::Directive on_tick(const data::TickQuote& quote, const backtest::Account& account) override;
	std::string_view name() const override { return cfg_.self_learning ? "pmbcs_selflearning" : "pmbcs_simple"; }

	const PredictionTrace& trace() const { return trace_; }
	const PmbcsConfig& config() const { return cfg_; }

private:
	PmbcsConfig cfg_;
	PredictionTrace trace_;
	std::size_t next_eval_ = 0;
	std::vector<int> row_;
};

} // namespace stringmom::pmbcs
