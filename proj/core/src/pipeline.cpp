#include "stringmom/pipeline.hpp"

#include "stringmom/baselines.hpp"
#include "stringmom/error.hpp"
#include "stringmom/pmbcs.hpp"
#include "stringmom/report.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <ostream>

namespace stringmom::app {

data::TickStream load_stream(const RunConfig& cfg) {
	const auto& d = cfg.data;
	if (d.source == data::StreamSource::file) {
		auto stream = data::load_ticks(d.path);
		if (d.spread_pips) {
			return data::with_spread(stream, *d.spread_pips * d.pip);
		}
		return stream;
	}
	auto params = d.synthetic;
	if (d.spread_pips) {
		params.spread = *d.spread_pips * d.pip;
	}
	try {
		return data::generate_synthetic(cfg.seed, d.n, d.model, params);
	} catch (const std::invalid_argument& e) {
		throw ConfigError(fmt::format("synthetic data: {}", e.what()));
	}
}

std::vector<SpinPrediction> replica_predictions(const data::TickStream& stream,
                                                std::span<const TradePosition> closed, const ReplicaSpec& spec) {
	const std::size_t h_op = spec.geometry.h_op;
	std::vector<const TradePosition*> longs;
	for (const auto& p : closed) {
		if (p.side == Side::long_side && p.open_tau >= h_op) {
			longs.push_back(&p);
		}
	}
	auto by_close = longs;
	std::stable_sort(by_close.begin(), by_close.end(),
	                 [](const auto* a, const auto* b) { return a->close_tau < b->close_tau; });
	std::stable_sort(longs.begin(), longs.end(),
	                 [](const auto* a, const auto* b) { return a->open_tau < b->open_tau; });

	const auto bids = stream.bids();
	const auto asks = stream.asks();
	auto make = [&](const TradePosition& p, replica::Spin spin) {
		const std::size_t from = p.open_tau - h_op;
		return replica::make_replica(std::span(bids).subspan(from, h_op + 1), std::span(asks).subspan(from, h_op + 1),
		                             spec.q, spin);
	};

	std::vector<SpinPrediction> out;
	std::vector<replica::Replica> pending;
	std::optional<replica::ReplicaSystem> system;
	std::size_t next = 0;
	for (const auto* probe : longs) {
		while (next < by_close.size() && by_close[next]->close_tau <= probe->open_tau) {
			const auto& t = *by_close[next++];
			auto r = make(t, replica::spin_from_trade(t.close_price, t.open_price));
			if (system) {
				system->shift(std::move(r));
			} else {
				pending.push_back(std::move(r));
				if (pending.size() == spec.capacity) {
					system.emplace(spec.geometry, std::move(pending));
				}
			}
		}
		if (system) {
			const auto spin = replica::spin_from_trade(probe->close_price, probe->open_price);
			out.push_back({probe->open_tau, system->fuzzy_spin(make(*probe, spin)), spin});
		}
	}
	return out;
}

RunOutcome execute(const RunConfig& cfg, const data::TickStream& stream) {
	RunOutcome o;
	o.model = std::string(to_string(cfg.kind, cfg.benchmark));
	o.ticks = stream.size();

	if (cfg.kind == ModelKind::benchmark) {
		auto strategy = baselines::make_benchmark(cfg.benchmark);
		o.result = backtest::run_backtest(stream, *strategy, cfg.strategy);
	} else {
		pmbcs::PmbcsStrategy strategy(stream, pmbcs_config(cfg));
		o.result = backtest::run_backtest(stream, strategy, cfg.strategy);
		const auto& trace = strategy.trace();
		o.sets = strategy.config().sets;
		o.scores = trace.final_scores;
		o.incoming = trace.incoming.normalized();
		o.outgoing = trace.outgoing.normalized();
	}

	o.spread_hist = data::spread_histogram(stream, cfg.report.spread_bin_pips * cfg.data.pip);
	o.trades_per_day = data::trades_per_day_histogram(o.result.closed);

	std::vector<replica::SpinTrade> spins;
	for (const auto& p : o.result.closed) {
		if (p.side == Side::long_side) {
			spins.push_back({p.close_tau - p.open_tau, replica::spin_from_trade(p.close_price, p.open_price)});
		}
	}
	o.spin_hist = replica::spin_histograms(spins, cfg.report.spin_bin);
	if (cfg.replica.enabled) {
		o.spin_predictions = replica_predictions(stream, o.result.closed, cfg.replica);
	}
	return o;
}

RunOutcome execute(const RunConfig& cfg) {
	return execute(cfg, load_stream(cfg));
}

RunOutcome run(const RunConfig& cfg) {
	auto outcome = execute(cfg);
	write_bundle(outcome, cfg, cfg.out);
	return outcome;
}

std::string_view to_string(SweepAxis axis) {
	switch (axis) {
	case SweepAxis::l_s:
		return "l_s";
	case SweepAxis::Q:
		return "Q";
	case SweepAxis::func:
		return "func";
	case SweepAxis::spread:
		return "spread";
	case SweepAxis::n_s:
		return "n_s";
	}
	return "?";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
	for (auto a : {SweepAxis::l_s, SweepAxis::Q, SweepAxis::func, SweepAxis::spread, SweepAxis::n_s}) {
		if (name == to_string(a)) {
			return a;
		}
	}
	throw ConfigError(fmt::format("unknown sweep axis '{}' (l_s, Q, func, spread, n_s)", name));
}

RunConfig with_axis_value(const RunConfig& cfg, SweepAxis axis, const std::string& value) {
	RunConfig next = cfg;
	auto number = [&] {
		double v = 0.0;
		std::size_t used = 0;
		try {
			v = std::stod(value, &used);
		} catch (const std::exception&) {
			used = 0;
		}
		if (used != value.size() || value.empty()) {
			throw ConfigError(fmt::format("sweep value '{}' is not a number", value));
		}
		return v;
	};
	auto count = [&] {
		const double v = number();
		if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
			throw ConfigError(fmt::format("sweep value '{}' is not a positive integer", value));
		}
		return static_cast<std::size_t>(v);
	};
	switch (axis) {
	case SweepAxis::l_s:
		next.strings.lengths = {count()};
		break;
	case SweepAxis::Q:
		next.strings.exponents = {number()};
		break;
	case SweepAxis::func:
		try {
			next.strings.functions = {strings::pattern_function_from_string(value)};
		} catch (const std::invalid_argument& e) {
			throw ConfigError(e.what());
		}
		break;
	case SweepAxis::spread:
		next.data.spread_pips = number();
		break;
	case SweepAxis::n_s:
		next.strings.n_s = count();
		break;
	}
	next.echo[fmt::format("sweep.{}", to_string(axis))] = value;
	finalize(next);
	return next;
}

std::vector<SweepRow> sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<std::string>& values) {
	if (values.empty()) {
		throw ConfigError("sweep needs at least one value");
	}
	std::vector<SweepRow> rows;
	for (const auto& v : values) {
		const auto run_cfg = with_axis_value(cfg, axis, v);
		rows.push_back({v, execute(run_cfg).result.summary});
	}
	return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
	out << "axis_value,final_nav,nav_pct,mean,sigma\n";
	for (const auto& r : rows) {
		out << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.value, r.summary.final_nav, r.summary.nav_pct,
		                   r.summary.mean, r.summary.sigma);
	}
}

} // namespace stringmom::app
