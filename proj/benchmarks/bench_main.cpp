#include "stringmom/backtester.hpp"
#include "stringmom/momentum_bank.hpp"
#include "stringmom/spin_replica.hpp"
#include "stringmom/string_core.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace stringmom;

namespace {

std::vector<double> walk(std::size_t n) {
	std::mt19937_64 rng(1);
	std::normal_distribution<double> z(0.0, 1e-4);
	std::vector<double> p{1.3};
	while (p.size() < n) {
		p.push_back(p.back() + z(rng));
	}
	return p;
}

std::vector<strings::StringParams> grid16(std::size_t length) {
	std::vector<strings::StringParams> sets;
	for (unsigned m = 0; m < 4; ++m) {
		for (double q : {8.0, 16.0, 24.0, 32.0}) {
			sets.push_back({length, m, q, strings::PatternFunction::cos, 0.0});
		}
	}
	return sets;
}

} // namespace

static void BM_StringMomentum(benchmark::State& state) {
	const auto length = static_cast<std::size_t>(state.range(0));
	const auto prices = walk(length + 1);
	const strings::StringParams p{length, 2, 8.0, strings::PatternFunction::cos, 0.0};
	for (auto _ : state) {
		benchmark::DoNotOptimize(strings::string_momentum(prices, p).value);
	}
}
BENCHMARK(BM_StringMomentum)->Arg(100)->Arg(900);

static void BM_MomentumBankTick(benchmark::State& state) {
	const auto length = static_cast<std::size_t>(state.range(0));
	const strings::MomentumBank bank(grid16(length));
	const auto prices = walk(length + 4096);
	std::vector<strings::MomentumSample> out(bank.size());
	strings::MomentumBank::Workspace ws;
	std::size_t end = length;
	for (auto _ : state) {
		bank.evaluate(prices, end, out, ws);
		benchmark::DoNotOptimize(out.data());
		end = end + 1 < prices.size() ? end + 1 : length;
	}
	state.SetItemsProcessed(state.iterations() * static_cast<long>(bank.size()));
}
BENCHMARK(BM_MomentumBankTick)->Arg(200)->Arg(900);

static void BM_BacktesterStep(benchmark::State& state) {
	const auto mids = walk(1 << 16);
	std::vector<data::TickQuote> quotes;
	for (std::size_t i = 0; i < mids.size(); ++i) {
		quotes.push_back({i, Timestamp{std::chrono::seconds(i)}, mids[i] - 1e-4, mids[i] + 1e-4});
	}
	std::vector<backtest::Directive> directives;
	for (std::size_t i = 0; i < quotes.size(); ++i) {
		directives.push_back(backtest::signal_directive(i, i % 97 == 0 ? 1 : (i % 131 == 0 ? -1 : 0)));
	}
	backtest::StrategyConfig cfg;
	cfg.max_hold = 600;
	for (auto _ : state) {
		backtest::Backtester bt(cfg);
		for (std::size_t i = 0; i < quotes.size(); ++i) {
			bt.step(quotes[i], directives[i]);
		}
		benchmark::DoNotOptimize(bt.account().nav());
	}
	state.SetItemsProcessed(state.iterations() * static_cast<long>(quotes.size()));
}
BENCHMARK(BM_BacktesterStep);

static void BM_FuzzySpin(benchmark::State& state) {
	replica::ReplicaGeometry g;
	const auto bids = walk(4096);
	std::vector<double> asks(bids);
	for (auto& a : asks) {
		a += 2e-4;
	}
	std::vector<replica::Replica> store;
	const auto n = static_cast<std::size_t>(state.range(0));
	for (std::size_t i = 0; i < n; ++i) {
		const auto off = (i * 13) % (bids.size() - g.h_op - 1);
		store.push_back(replica::make_replica(std::span(bids).subspan(off, g.h_op + 1),
		                                      std::span(asks).subspan(off, g.h_op + 1), 1.0, i % 2 ? 1 : -1));
	}
	const replica::ReplicaSystem sys(g, store);
	const auto probe = replica::make_replica(std::span(bids).first(g.h_op + 1), std::span(asks).first(g.h_op + 1), 1.0);
	for (auto _ : state) {
		benchmark::DoNotOptimize(sys.fuzzy_spin(probe));
	}
}
BENCHMARK(BM_FuzzySpin)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
