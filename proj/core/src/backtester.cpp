#include "stringmom/backtester.hpp"

#include "stringmom/error.hpp"

#include <fmt/core.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace stringmom::backtest {

void validate(const StrategyConfig& cfg) {
	if (!(cfg.altitude > 0.0 && cfg.altitude <= 1.0)) {
		throw std::invalid_argument("altitude must lie in (0, 1]");
	}
	if (cfg.max_open == 0) {
		throw std::invalid_argument("max_open must be positive");
	}
	if (cfg.max_opens_per_window == 0 || cfg.rate_window.count() <= 0) {
		throw std::invalid_argument("rate cap needs a positive count and window");
	}
	if (cfg.units <= 0) {
		throw std::invalid_argument("units must be positive");
	}
	if (cfg.max_hold == 0) {
		throw std::invalid_argument("max_hold must be positive");
	}
	if (!(cfg.start_nav > 0.0)) {
		throw std::invalid_argument("start NAV must be positive");
	}
}

Directive hold_directive(std::size_t tau) {
	Directive d;
	d.command.tau = tau;
	d.command.per_set = {0};
	d.allow_open = false;
	return d;
}

Directive signal_directive(std::size_t tau, int signal) {
	Directive d;
	d.command = predict::aggregate(std::span<const int>(&signal, 1), tau);
	return d;
}

std::string_view to_string(ReportEvent e) {
	switch (e) {
	case ReportEvent::open:
		return "open";
	case ReportEvent::close:
		return "close";
	case ReportEvent::rate_limited:
		return "rate_limited";
	}
	return "?";
}

Backtester::Backtester(StrategyConfig cfg) : cfg_(cfg), account_(cfg.start_nav) {
	validate(cfg_);
}

void Backtester::open(const data::TickQuote& quote, Side side, std::size_t set_id) {
	const double price = side == Side::long_side ? quote.ask : quote.bid;
	if (account_.recent_opens_.size() >= cfg_.max_opens_per_window) {
		reports_.push_back({quote.index, quote.timestamp, ReportEvent::rate_limited, side, cfg_.units, price, 0.0, set_id});
		return;
	}
	if (account_.open_.size() >= cfg_.max_open) {
		return;
	}
	TradePosition pos;
	pos.id = next_id_++;
	pos.side = side;
	pos.units = cfg_.units;
	pos.open_tau = quote.index;
	pos.open_time = quote.timestamp;
	pos.open_price = price;
	account_.open_.push_back(pos);
	account_.recent_opens_.push_back(quote.timestamp);
	reports_.push_back({quote.index, quote.timestamp, ReportEvent::open, side, cfg_.units, price, 0.0, set_id});
}

void Backtester::close(std::size_t slot, const data::TickQuote& quote, std::size_t set_id) {
	TradePosition pos = account_.open_[slot];
	account_.open_.erase(account_.open_.begin() + static_cast<std::ptrdiff_t>(slot));
	pos.close_tau = quote.index;
	pos.close_time = quote.timestamp;
	pos.close_price = pos.side == Side::long_side ? quote.bid : quote.ask;
	pos.realized_pnl = pos.side == Side::long_side ? (pos.close_price - pos.open_price) * static_cast<double>(pos.units)
	                                               : (pos.open_price - pos.close_price) * static_cast<double>(pos.units);
	pos.status = PositionStatus::closed;
	account_.realized_ += pos.realized_pnl;
	reports_.push_back(
	    {quote.index, quote.timestamp, ReportEvent::close, pos.side, pos.units, pos.close_price, pos.realized_pnl, set_id});
	account_.closed_.push_back(pos);
}

void Backtester::remark(const data::TickQuote& quote) {
	double mtm = 0.0;
	for (const auto& pos : account_.open_) {
		mtm += pos.mark_to_market(quote.bid, quote.ask);
	}
	account_.nav_ = account_.start_nav_ + account_.realized_ + mtm;
	nav_.push_back({quote.index, quote.timestamp, account_.nav_});
}

std::span<const ExecutionReport> Backtester::step(const data::TickQuote& quote, const Directive& directive) {
	if (started_ && quote.index <= last_index_) {
		throw DataError(fmt::format("out-of-order quote {} after {}", quote.index, last_index_));
	}
	started_ = true;
	last_index_ = quote.index;
	tick_reports_begin_ = reports_.size();

	const double summary = directive.command.summary;
	const int sign = summary > 0.0 ? 1 : (summary < 0.0 ? -1 : 0);

	for (std::size_t slot = 0; slot < account_.open_.size();) {
		const auto& pos = account_.open_[slot];
		const bool opposed = sign != 0 && sign != direction(pos.side);
		const bool expired = quote.index - pos.open_tau > cfg_.max_hold;
		if (directive.close_all || opposed || expired) {
			close(slot, quote, directive.set_id);
		} else {
			++slot;
		}
	}

	const auto horizon = quote.timestamp - std::chrono::duration_cast<std::chrono::milliseconds>(cfg_.rate_window);
	while (!account_.recent_opens_.empty() && account_.recent_opens_.front() <= horizon) {
		account_.recent_opens_.pop_front();
	}

	if (directive.allow_open && std::abs(summary) >= cfg_.altitude) {
		open(quote, summary > 0.0 ? Side::long_side : Side::short_side, directive.set_id);
	}

	remark(quote);
	return std::span<const ExecutionReport>(reports_).subspan(tick_reports_begin_);
}

NavSummary summarize(std::span<const NavPoint> series, double reference) {
	if (series.empty()) {
		throw std::invalid_argument("NAV summary of an empty series");
	}
	NavSummary s;
	s.final_nav = series.back().nav;
	s.nav_pct = (s.final_nav - reference) / reference * 100.0;
	double sum = 0.0;
	for (const auto& p : series) {
		sum += p.nav - reference;
	}
	const auto n = static_cast<double>(series.size());
	s.mean = sum / n;
	double var = 0.0;
	for (const auto& p : series) {
		const double d = p.nav - reference - s.mean;
		var += d * d;
	}
	s.sigma = std::sqrt(var / n);
	return s;
}

namespace {

BacktestResult collect(const Backtester& bt) {
	BacktestResult r;
	r.nav = bt.nav_series();
	r.reports = bt.reports();
	r.closed.assign(bt.account().closed().begin(), bt.account().closed().end());
	r.open.assign(bt.account().open_positions().begin(), bt.account().open_positions().end());
	r.summary = summarize(r.nav, bt.config().start_nav);
	return r;
}

} // namespace

BacktestResult run_backtest(const data::TickStream& stream, Strategy& strategy, const StrategyConfig& cfg) {
	Backtester bt(cfg);
	for (const auto& quote : stream.quotes()) {
		bt.step(quote, strategy.on_tick(quote, bt.account()));
	}
	return collect(bt);
}

BacktestResult replay(const data::TickStream& stream, std::span<const Directive> directives,
                      const StrategyConfig& cfg) {
	if (directives.size() != stream.size()) {
		throw std::invalid_argument("replay needs one directive per quote");
	}
	Backtester bt(cfg);
	for (std::size_t i = 0; i < stream.size(); ++i) {
		bt.step(stream[i], directives[i]);
	}
	return collect(bt);
}

std::map<double, double> spread_sweep(const data::TickStream& stream, std::span<const Directive> directives,
                                      std::span<const double> spreads, const StrategyConfig& cfg) {
	std::map<double, double> out;
	for (double s : spreads) {
		if (!(s >= 0.0)) {
			throw std::invalid_argument("spread must be non-negative");
		}
		out[s] = replay(data::with_spread(stream, s), directives, cfg).summary.final_nav;
	}
	return out;
}

void write_nav_csv(std::ostream& out, std::span<const NavPoint> series) {
	out << "tau,timestamp,nav\n";
	for (const auto& p : series) {
		out << fmt::format("{},{},{:.6f}\n", p.tau, format_timestamp(p.timestamp), p.nav);
	}
}

void write_execution_log(std::ostream& out, std::span<const ExecutionReport> reports) {
	out << "tau,timestamp,event,side,units,price,pnl,set_id\n";
	for (const auto& r : reports) {
		out << fmt::format("{},{},{},{},{},{:.6f},{:.6f},{}\n", r.tau, format_timestamp(r.timestamp), to_string(r.event),
		                   to_string(r.side), r.units, r.price, r.pnl, r.set_id);
	}
}

} // namespace stringmom::backtest
