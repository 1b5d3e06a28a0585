#include "stringmom/baselines.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace stringmom;
namespace tst = stringmom::testing;
using namespace stringmom::baselines;

namespace {

BenchmarkConfig kind(BenchmarkKind k) {
	BenchmarkConfig cfg;
	cfg.kind = k;
	return cfg;
}

// Reference MACD crossings with plain arrays.
std::vector<int> macd_oracle(const std::vector<double>& p, std::size_t fast, std::size_t slow, std::size_t signal) {
	const double af = 2.0 / (fast + 1.0);
	const double as = 2.0 / (slow + 1.0);
	const double ag = 2.0 / (signal + 1.0);
	std::vector<double> ef(p.size()), es(p.size()), line(p.size()), sig(p.size());
	std::vector<int> out(p.size(), 0);
	ef[0] = es[0] = p[0];
	line[0] = 0.0;
	sig[0] = 0.0;
	for (std::size_t i = 1; i < p.size(); ++i) {
		ef[i] = ef[i - 1] + af * (p[i] - ef[i - 1]);
		es[i] = es[i - 1] + as * (p[i] - es[i - 1]);
		line[i] = ef[i] - es[i];
		sig[i] = sig[i - 1] + ag * (line[i] - sig[i - 1]);
		const double prev = line[i - 1] - sig[i - 1];
		const double cur = line[i] - sig[i];
		if (i + 1 >= slow) {
			out[i] = prev <= 0.0 && cur > 0.0 ? 1 : (prev >= 0.0 && cur < 0.0 ? -1 : 0);
		}
	}
	return out;
}

} // namespace

TEST(Arima, Forecasts) {
	const std::vector<double> h{1.2998, 1.3002, 1.3000};
	EXPECT_DOUBLE_EQ(arima_forecast(kind(BenchmarkKind::arima_010), h), 1.3000);
	auto drift = kind(BenchmarkKind::arima_010_c);
	drift.c = 0.0001;
	EXPECT_NEAR(arima_forecast(drift, h), 1.3001, 1e-15);
	auto mean = kind(BenchmarkKind::arima_000_c);
	mean.mean_window = 2;
	const std::vector<double> m{7.0, 1.0, 3.0};
	EXPECT_DOUBLE_EQ(arima_forecast(mean, m), 2.0);
	mean.mean_window = 10;
	EXPECT_NEAR(arima_forecast(mean, m), 11.0 / 3.0, 1e-15);
	EXPECT_THROW(arima_forecast(kind(BenchmarkKind::arima_010), {}), std::invalid_argument);
	EXPECT_THROW(arima_forecast(kind(BenchmarkKind::macd), h), std::invalid_argument);
}

TEST(Arima, RandomWalkForecastErrorIsOneTickMove) {
	std::mt19937_64 rng(8);
	const auto p = tst::random_prices(rng, 300, 1.2, 1.4);
	const auto cfg = kind(BenchmarkKind::arima_010);
	for (std::size_t t = 1; t < p.size(); ++t) {
		const double f = arima_forecast(cfg, std::span(p).first(t));
		EXPECT_EQ(p[t] - f, p[t] - p[t - 1]);
	}
}

TEST(Arima, ConstantStreamNeverTrades) {
	const auto s = tst::flat_stream(500, 1.3, 0.0002);
	for (auto k : {BenchmarkKind::arima_010, BenchmarkKind::arima_010_c, BenchmarkKind::arima_000_c}) {
		auto cfg = kind(k);
		cfg.mean_window = 20;
		ArimaStrategy a(cfg);
		const auto r = backtest::run_backtest(s, a, {});
		EXPECT_TRUE(r.reports.empty()) << to_string(k);
		EXPECT_EQ(r.summary.final_nav, 1e5);
	}
}

TEST(Arima, SignalFollowsPreviousForecast) {
	// Mid jumps up: the stale arima_010 forecast lies below the price.
	const auto s = tst::from_mids({1.3, 1.3, 1.3010, 1.3010, 1.2990}, 0.0002);
	ArimaStrategy a(kind(BenchmarkKind::arima_010));
	backtest::Account acct;
	std::vector<int> signals;
	for (const auto& q : s.quotes()) {
		signals.push_back(static_cast<int>(a.on_tick(q, acct).command.summary));
	}
	EXPECT_EQ(signals, (std::vector<int>{0, 0, -1, 0, 1}));
}

TEST(Macd, ConstantPriceIsSilent) {
	MacdIndicator m(12, 26, 9);
	for (int i = 0; i < 200; ++i) {
		EXPECT_EQ(m.update(1.3), 0);
		EXPECT_EQ(m.macd(), 0.0);
	}
	EXPECT_EQ(m.signal_line(), 0.0);
}

TEST(Macd, RampThenFlatCrossesDownOnce) {
	std::vector<double> p;
	for (int i = 0; i < 60; ++i) {
		p.push_back(1.3 + 1e-4 * i);
	}
	for (int i = 0; i < 200; ++i) {
		p.push_back(p.back());
	}
	MacdIndicator m(12, 26, 9);
	std::vector<int> got;
	for (double x : p) {
		got.push_back(m.update(x));
	}
	const auto want = macd_oracle(p, 12, 26, 9);
	EXPECT_EQ(got, want);
	std::size_t downs = 0;
	std::size_t ups = 0;
	for (std::size_t i = 0; i < got.size(); ++i) {
		downs += got[i] == -1;
		ups += got[i] == 1 && i >= 26;
		if (got[i] == -1) {
			EXPECT_GE(i, 60u);
		}
	}
	EXPECT_EQ(downs, 1u);
	EXPECT_EQ(ups, 0u);
}

TEST(Macd, MatchesOracleOnRandomWalk) {
	std::mt19937_64 rng(14);
	std::normal_distribution<double> z(0.0, 1e-4);
	std::vector<double> p{1.3};
	for (int i = 0; i < 3000; ++i) {
		p.push_back(p.back() + z(rng));
	}
	MacdIndicator m(12, 26, 9);
	std::vector<int> got;
	for (double x : p) {
		got.push_back(m.update(x));
	}
	EXPECT_EQ(got, macd_oracle(p, 12, 26, 9));

	auto cfg = kind(BenchmarkKind::macd);
	EXPECT_EQ(macd_signal(cfg, p), got.back());
	EXPECT_THROW(macd_signal(cfg, std::span(p).first(10)), std::invalid_argument);
	EXPECT_THROW(MacdIndicator(26, 12, 9), std::invalid_argument);
}

TEST(Scalper, FlatMarketNeverOpens) {
	const auto s = tst::flat_stream(300, 1.3, 0.0002);
	ScalperStrategy sc(kind(BenchmarkKind::scalper));
	EXPECT_TRUE(backtest::run_backtest(s, sc, {}).reports.empty());
}

TEST(Scalper, TakeProfitAtBid) {
	const auto s = tst::quotes({{1.2997, 1.2999},
	                            {1.2998, 1.3000},
	                            {1.3001, 1.3003},
	                            {1.3003, 1.3005},
	                            {1.3004, 1.3006},
	                            {1.3005, 1.3007},
	                            {1.3006, 1.3008}});
	ScalperStrategy sc(kind(BenchmarkKind::scalper));
	backtest::StrategyConfig cfg;
	cfg.max_open = 1;
	const auto r = backtest::run_backtest(s, sc, cfg);
	ASSERT_GE(r.closed.size(), 1u);
	EXPECT_EQ(r.closed[0].open_tau, 1u);
	EXPECT_NEAR(r.closed[0].open_price, 1.3000, 1e-15);
	EXPECT_EQ(r.closed[0].close_tau, 5u);
	EXPECT_NEAR(r.closed[0].close_price, 1.3005, 1e-15);
}

TEST(Scalper, StopLossShort) {
	BenchmarkConfig cfg = kind(BenchmarkKind::scalper);
	TradePosition pos;
	pos.side = Side::short_side;
	pos.open_price = 1.3000;
	pos.open_tau = 0;
	const std::vector<TradePosition> open{pos};
	EXPECT_FALSE(scalper_signal(cfg, {1, {}, 1.3002, 1.3004}, 1.3, open).close);
	EXPECT_TRUE(scalper_signal(cfg, {2, {}, 1.3003, 1.3005}, 1.3, open).close);
	EXPECT_TRUE(scalper_signal(cfg, {300, {}, 1.2999, 1.3001}, 1.3, open).close);
	EXPECT_EQ(scalper_signal(cfg, {3, {}, 1.2999, 1.3001}, 1.3002, {}).open, Side::short_side);
}

TEST(Benchmarks, Factory) {
	for (auto k : {BenchmarkKind::scalper, BenchmarkKind::macd, BenchmarkKind::arima_000_c, BenchmarkKind::arima_010,
	               BenchmarkKind::arima_010_c}) {
		EXPECT_EQ(benchmark_kind_from_string(to_string(k)), k);
		EXPECT_EQ(make_benchmark(kind(k))->name(), to_string(k));
	}
	EXPECT_THROW(benchmark_kind_from_string("lstm"), std::invalid_argument);
	auto bad = kind(BenchmarkKind::macd);
	bad.macd_fast = 30;
	EXPECT_THROW(make_benchmark(bad), std::invalid_argument);
}
