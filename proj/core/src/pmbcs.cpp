#include "stringmom/pmbcs.hpp"

#include "stringmom/error.hpp"
#include "stringmom/momentum_bank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace stringmom::pmbcs {

namespace {

constexpr std::size_t kBlock = 4096;

unsigned resolve_threads(unsigned requested) {
	if (requested != 0) {
		return requested;
	}
	return std::max(1u, std::thread::hardware_concurrency());
}

// Momenta for ticks [begin, end) into out[(t - begin) * sets + i].
void fill_block(const strings::MomentumBank& bank, std::span<const double> mids, std::size_t begin,
                std::size_t end, std::vector<strings::MomentumSample>& out,
                std::vector<strings::MomentumBank::Workspace>& spaces, unsigned threads) {
	const std::size_t n_s = bank.size();
	const std::size_t count = end - begin;
	auto work = [&](std::size_t from, std::size_t to, strings::MomentumBank::Workspace& ws) {
		for (std::size_t t = from; t < to; ++t) {
			bank.evaluate(mids, t, std::span(out).subspan((t - begin) * n_s, n_s), ws);
		}
	};
	if (threads <= 1 || count < 2 * threads) {
		work(begin, end, spaces[0]);
		return;
	}
	std::vector<std::thread> pool;
	const std::size_t per = (count + threads - 1) / threads;
	for (unsigned k = 0; k < threads; ++k) {
		const std::size_t from = begin + k * per;
		const std::size_t to = std::min(end, from + per);
		if (from >= to) {
			break;
		}
		pool.emplace_back(work, from, to, std::ref(spaces[k]));
	}
	for (auto& th : pool) {
		th.join();
	}
}

eval::SharpeScore score_set(const PmbcsConfig& cfg, const eval::ShadowBook& book, std::span<const double> mids,
                            std::size_t tau, std::size_t set) {
	const auto ledger = book.closed();
	eval::SharpeScore undefined;
	undefined.set_id = set;
	undefined.penalty = cfg.evaluator.penalty;
	if (ledger.empty()) {
		return undefined;
	}
	if (cfg.evaluator.method == ScoreMethod::sharpe) {
		return eval::sharpe_ratio(ledger, cfg.evaluator.penalty, set);
	}
	const std::size_t span_len = std::max<std::size_t>(1, cfg.sets[set].length / 2);
	if (tau < span_len) {
		return undefined;
	}
	try {
		const double sigma_r = strings::return_volatility(mids.subspan(tau - span_len, span_len + 1), 2 * span_len);
		return eval::volatility_sharpe(ledger, cfg.evaluator.penalty, sigma_r, set);
	} catch (const NumericError&) {
		return undefined;
	}
}

std::optional<double> momentum_skewness(const predict::PredictorState& p) {
	const auto h = p.history();
	if (h.size() < 3) {
		return std::nullopt;
	}
	try {
		return eval::skewness(h);
	} catch (const std::invalid_argument&) {
		return std::nullopt;
	}
}

} // namespace

void validate(const EvaluatorConfig& cfg) {
	if (!(cfg.penalty >= 0.0)) {
		throw std::invalid_argument("penalty must be non-negative");
	}
	if (cfg.eval_interval == 0 || cfg.score_window == 0) {
		throw std::invalid_argument("eval_interval and score_window must be positive");
	}
	if (cfg.max_abs_skewness && !(*cfg.max_abs_skewness >= 0.0)) {
		throw std::invalid_argument("max_abs_skewness must be non-negative");
	}
}

PredictionTrace predict_stream(const data::TickStream& stream, const PmbcsConfig& cfg) {
	if (cfg.sets.empty()) {
		throw std::invalid_argument("PMBCS needs at least one parameter set");
	}
	if (!cfg.self_learning && cfg.sets.size() != 1) {
		throw std::invalid_argument("the simple model takes exactly one parameter set");
	}
	if (cfg.shadow_max_hold == 0 || cfg.momentum_bins == 0) {
		throw std::invalid_argument("shadow_max_hold and momentum_bins must be positive");
	}
	predict::validate(cfg.predictor);
	validate(cfg.evaluator);

	const auto mids = stream.mids();
	const std::size_t n = mids.size();
	const std::size_t n_s = cfg.sets.size();
	const strings::MomentumBank bank(cfg.sets);

	PredictionTrace trace;
	trace.ticks = n;
	trace.sets = n_s;
	trace.signals.assign(n * n_s, 0);
	trace.incoming = predict::UnitHistogramCounter(cfg.momentum_bins);
	trace.outgoing = predict::UnitHistogramCounter(cfg.momentum_bins);

	std::vector<predict::PredictorState> predictors;
	std::vector<eval::ShadowBook> books;
	std::vector<std::size_t> lookback(n_s);
	for (std::size_t i = 0; i < n_s; ++i) {
		predictors.emplace_back(cfg.sets[i], cfg.predictor);
		books.emplace_back(cfg.shadow_max_hold, cfg.evaluator.score_window);
		lookback[i] = std::max<std::size_t>(1, cfg.sets[i].length / 2);
	}

	const unsigned threads = resolve_threads(cfg.threads);
	std::vector<strings::MomentumBank::Workspace> spaces(threads);
	std::vector<strings::MomentumSample> block(kBlock * n_s);
	std::optional<std::size_t> optimal;

	auto evaluate_at = [&](std::size_t tau) {
		EvaluationPoint ep;
		ep.tau = tau;
		ep.scores.reserve(n_s);
		for (std::size_t i = 0; i < n_s; ++i) {
			ep.scores.push_back(score_set(cfg, books[i], mids, tau, i));
		}
		if (cfg.evaluator.max_abs_skewness) {
			for (const auto& p : predictors) {
				ep.skewness.push_back(momentum_skewness(p));
			}
		}
		if (auto best = eval::try_select_optimal(ep.scores)) {
			optimal = best;
		}
		ep.optimal = optimal;
		return ep;
	};

	for (std::size_t begin = 0; begin < n; begin += kBlock) {
		const std::size_t end = std::min(n, begin + kBlock);
		fill_block(bank, mids, begin, end, block, spaces, threads);
		for (std::size_t t = begin; t < end; ++t) {
			const auto* row = &block[(t - begin) * n_s];
			auto* sig = &trace.signals[t * n_s];
			for (std::size_t i = 0; i < n_s; ++i) {
				int s = 0;
				if (row[i].ready) {
					if (row[i].degenerate) {
						++trace.degenerate_windows;
					} else {
						trace.incoming.add(row[i].value);
					}
					const int hint = predict::slope_direction(mids[t], mids[t - lookback[i]]);
					s = predictors[i].update_and_signal(row[i].value, row[i].degenerate, hint);
					if (s != 0) {
						trace.outgoing.add(row[i].value);
					}
				}
				sig[i] = static_cast<std::int8_t>(s);
				books[i].on_tick(t, mids[t], s);
			}
			if ((t + 1) % cfg.evaluator.eval_interval == 0) {
				trace.evaluations.push_back(evaluate_at(t));
			}
		}
	}
	if (n > 0) {
		trace.final_scores = evaluate_at(n - 1).scores;
	}
	return trace;
}

PmbcsStrategy::PmbcsStrategy(const data::TickStream& stream, PmbcsConfig cfg)
    : cfg_(std::move(cfg)), trace_(predict_stream(stream, cfg_)), row_(trace_.sets) {}

backtest::Directive PmbcsStrategy::on_tick(const data::TickQuote& quote, const backtest::Account&) {
	const std::size_t t = quote.index;
	if (t >= trace_.ticks) {
		throw DataError("quote beyond the predicted stream");
	}
	while (next_eval_ < trace_.evaluations.size() && trace_.evaluations[next_eval_].tau <= t) {
		++next_eval_;
	}
	for (std::size_t i = 0; i < trace_.sets; ++i) {
		row_[i] = trace_.signal(t, i);
	}

	backtest::Directive d;
	d.command = predict::aggregate(row_, t);
	if (!cfg_.self_learning) {
		return d;
	}

	d.allow_open = false;
	if (next_eval_ == 0 || !trace_.evaluations[next_eval_ - 1].optimal) {
		return d;
	}
	const auto& current = trace_.evaluations[next_eval_ - 1];
	const std::size_t opt = *current.optimal;
	d.set_id = opt;
	const int s = row_[opt];
	const double summary = d.command.summary;
	const int summary_sign = summary > 0.0 ? 1 : (summary < 0.0 ? -1 : 0);
	if (s == 0 || s != summary_sign) {
		return d;
	}
	if (cfg_.evaluator.min_sharpe) {
		const auto& r = current.scores[opt].ratio;
		if (!r || *r < *cfg_.evaluator.min_sharpe) {
			return d;
		}
	}
	if (cfg_.evaluator.max_abs_skewness) {
		const auto& sk = current.skewness[opt];
		if (!sk || std::abs(*sk) > *cfg_.evaluator.max_abs_skewness) {
			return d;
		}
	}
	d.allow_open = true;
	return d;
}

} // namespace stringmom::pmbcs
