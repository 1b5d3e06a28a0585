#include "stringmom/pmbcs.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace stringmom;
namespace tst = stringmom::testing;
using namespace stringmom::pmbcs;

namespace {

data::TickStream walk(std::size_t n, std::uint64_t seed = 3) {
	data::SyntheticParams p;
	p.volatility = 1e-4;
	return data::generate_synthetic(seed, n, data::SyntheticModel::random_walk, p);
}

PmbcsConfig small_config(bool self_learning) {
	PmbcsConfig cfg;
	cfg.self_learning = self_learning;
	if (self_learning) {
		for (unsigned m = 0; m < 4; ++m) {
			for (double q : {1.0, 8.0}) {
				cfg.sets.push_back({40, m, q, strings::PatternFunction::cos, 0.0});
			}
		}
	} else {
		cfg.sets.push_back({40, 1, 2.0, strings::PatternFunction::cos, 0.0});
	}
	cfg.predictor.warmup = 100;
	cfg.predictor.band_window = 500;
	cfg.evaluator.eval_interval = 200;
	cfg.evaluator.score_window = 50;
	cfg.shadow_max_hold = 80;
	cfg.threads = 1;
	return cfg;
}

backtest::StrategyConfig strategy() {
	backtest::StrategyConfig s;
	s.max_hold = 80;
	s.max_opens_per_window = 1000;
	return s;
}

template <class T>
std::vector<T> copy(std::span<const T> s) {
	return {s.begin(), s.end()};
}

std::optional<std::size_t> optimal_at(const PredictionTrace& trace, std::size_t tau) {
	std::optional<std::size_t> best;
	for (const auto& e : trace.evaluations) {
		if (e.tau <= tau) {
			best = e.optimal;
		}
	}
	return best;
}

} // namespace

TEST(Pmbcs, TraceIndependentOfThreadCount) {
	const auto s = walk(12000);
	auto cfg = small_config(true);
	const auto one = predict_stream(s, cfg);
	cfg.threads = 4;
	const auto four = predict_stream(s, cfg);
	EXPECT_EQ(one.signals, four.signals);
	ASSERT_EQ(one.evaluations.size(), four.evaluations.size());
	for (std::size_t k = 0; k < one.evaluations.size(); ++k) {
		EXPECT_EQ(one.evaluations[k].optimal, four.evaluations[k].optimal);
	}
	EXPECT_EQ(copy(one.incoming.counts()), copy(four.incoming.counts()));
	EXPECT_EQ(copy(one.outgoing.counts()), copy(four.outgoing.counts()));
	EXPECT_EQ(one.evaluations.size(), 12000u / 200u);
	EXPECT_EQ(one.evaluations[0].tau, 199u);
}

TEST(Pmbcs, SignalsFollowWarmupAndSign) {
	const auto s = walk(3000);
	const auto cfg = small_config(true);
	const auto trace = predict_stream(s, cfg);
	ASSERT_EQ(trace.signals.size(), 3000u * cfg.sets.size());
	std::size_t nonzero = 0;
	for (std::size_t t = 0; t < trace.ticks; ++t) {
		for (std::size_t i = 0; i < trace.sets; ++i) {
			const int v = trace.signal(t, i);
			EXPECT_TRUE(v >= -1 && v <= 1);
			// 40 ticks to fill the window, then 100 momenta of warm-up.
			if (t < 40 + 99) {
				EXPECT_EQ(v, 0);
			}
			nonzero += v != 0;
		}
	}
	EXPECT_GT(nonzero, 0u);
	EXPECT_EQ(trace.incoming.total(), (3000u - 40u) * cfg.sets.size());
}

TEST(Pmbcs, FlatStreamNeverTrades) {
	const auto s = tst::flat_stream(2000, 1.3, 0.0002);
	for (bool sl : {false, true}) {
		PmbcsStrategy strat(s, small_config(sl));
		const auto r = backtest::run_backtest(s, strat, strategy());
		EXPECT_TRUE(r.reports.empty());
		EXPECT_EQ(r.summary.final_nav, 1e5);
		EXPECT_EQ(strat.trace().degenerate_windows, (2000u - 40u) * strat.config().sets.size());
	}
}

TEST(Pmbcs, SimpleModelTradesItsSignal) {
	const auto s = walk(5000);
	PmbcsStrategy strat(s, small_config(false));
	EXPECT_EQ(strat.name(), "pmbcs_simple");
	const auto r = backtest::run_backtest(s, strat, strategy());
	std::size_t opens = 0;
	for (const auto& e : r.reports) {
		if (e.event == backtest::ReportEvent::open) {
			EXPECT_EQ(direction(e.side), strat.trace().signal(e.tau, 0));
			++opens;
		}
	}
	EXPECT_GT(opens, 0u);
}

TEST(Pmbcs, SelfLearningOpensOnlyWithOptimalSet) {
	const auto s = walk(8000);
	PmbcsStrategy strat(s, small_config(true));
	EXPECT_EQ(strat.name(), "pmbcs_selflearning");
	const auto r = backtest::run_backtest(s, strat, strategy());
	const auto& trace = strat.trace();
	std::size_t opens = 0;
	for (const auto& e : r.reports) {
		if (e.event != backtest::ReportEvent::open) {
			continue;
		}
		++opens;
		const auto best = optimal_at(trace, e.tau);
		ASSERT_TRUE(best.has_value());
		EXPECT_EQ(e.set_id, *best);
		EXPECT_EQ(trace.signal(e.tau, *best), direction(e.side));
		int sum = 0;
		for (std::size_t i = 0; i < trace.sets; ++i) {
			sum += trace.signal(e.tau, i);
		}
		EXPECT_EQ(sum > 0 ? 1 : -1, direction(e.side));
		EXPECT_GE(std::abs(static_cast<double>(sum)) / static_cast<double>(trace.sets), 0.25);
	}
	EXPECT_GT(opens, 0u);
}

TEST(Pmbcs, SharpeGateBlocksEverything) {
	const auto s = walk(6000);
	auto cfg = small_config(true);
	cfg.evaluator.min_sharpe = 1e9;
	PmbcsStrategy strat(s, cfg);
	const auto r = backtest::run_backtest(s, strat, strategy());
	for (const auto& e : r.reports) {
		EXPECT_NE(e.event, backtest::ReportEvent::open);
	}
}

TEST(Pmbcs, ConfigValidation) {
	const auto s = walk(100);
	auto cfg = small_config(false);
	cfg.sets.push_back(cfg.sets[0]);
	EXPECT_THROW(PmbcsStrategy(s, cfg), std::invalid_argument);
	cfg = small_config(true);
	cfg.sets.clear();
	EXPECT_THROW(predict_stream(s, cfg), std::invalid_argument);
	cfg = small_config(true);
	cfg.evaluator.eval_interval = 0;
	EXPECT_THROW(predict_stream(s, cfg), std::invalid_argument);
}
