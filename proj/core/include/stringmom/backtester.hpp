#pragma once

#include "stringmom/market_data.hpp"
#include "stringmom/position.hpp"
#include "stringmom/predictor.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace stringmom::backtest {

struct StrategyConfig {
	double altitude = 0.25;                 // |summary| needed to open
	std::size_t max_open = 10;              // simultaneous positions
	std::size_t max_opens_per_window = 10;  // opens per rate window
	std::chrono::seconds rate_window{3600};
	std::int64_t units = 1000;              // lot size in base units
	std::size_t max_hold = 1800;            // ticks; older positions close
	double start_nav = 1e5;
};

void validate(const StrategyConfig& cfg);

/// What a strategy asks of the backtester on one tick. Positions whose side
/// opposes a nonzero summary close; a summary at or beyond the altitude
/// opens one position when `allow_open` holds and the caps permit.
struct Directive {
	predict::TradeCommand command;
	bool allow_open = true;
	bool close_all = false;
	std::size_t set_id = 0; // parameter set credited in the execution log
};

Directive hold_directive(std::size_t tau);
Directive signal_directive(std::size_t tau, int signal);

enum class ReportEvent { open, close, rate_limited };

std::string_view to_string(ReportEvent e);

struct ExecutionReport {
	std::size_t tau = 0;
	Timestamp timestamp{};
	ReportEvent event = ReportEvent::open;
	Side side = Side::long_side;
	std::int64_t units = 0;
	double price = 0.0;
	double pnl = 0.0;
	std::size_t set_id = 0;
};

struct NavPoint {
	std::size_t tau = 0;
	Timestamp timestamp{};
	double nav = 0.0;
};

/// nav = start_nav + realized + mark-to-market of open positions, where longs
/// mark at the bid and shorts at the ask.
class Account {
public:
	explicit Account(double start_nav = 1e5) : start_nav_(start_nav), nav_(start_nav) {}

	double start_nav() const { return start_nav_; }
	double nav() const { return nav_; }
	double realized() const { return realized_; }
	std::span<const TradePosition> open_positions() const { return open_; }
	std::span<const TradePosition> closed() const { return closed_; }

private:
	friend class Backtester;

	double start_nav_;
	double nav_;
	double realized_ = 0.0;
	std::vector<TradePosition> open_;
	std::vector<TradePosition> closed_;
	std::deque<Timestamp> recent_opens_;
};

/// Strictly sequential event loop over quotes.
class Backtester {
public:
	explicit Backtester(StrategyConfig cfg = {});

	/// Processes one quote. Returns the reports emitted on this tick. Throws
	/// DataError when the quote index does not advance.
	std::span<const ExecutionReport> step(const data::TickQuote& quote, const Directive& directive);

	const StrategyConfig& config() const { return cfg_; }
	const Account& account() const { return account_; }
	const std::vector<NavPoint>& nav_series() const { return nav_; }
	const std::vector<ExecutionReport>& reports() const { return reports_; }

private:
	void open(const data::TickQuote& quote, Side side, std::size_t set_id);
	void close(std::size_t slot, const data::TickQuote& quote, std::size_t set_id);
	void remark(const data::TickQuote& quote);

	StrategyConfig cfg_;
	Account account_;
	std::vector<NavPoint> nav_;
	std::vector<ExecutionReport> reports_;
	std::size_t tick_reports_begin_ = 0;
	std::uint64_t next_id_ = 1;
	bool started_ = false;
	std::size_t last_index_ = 0;
};

/// Anything that turns quotes into directives. Every strategy, PMBCS and
/// benchmarks alike, is run through run_backtest and the same Backtester.
class Strategy {
public:
	virtual ~Strategy() = default;
	virtual Directive on_tick(const data::TickQuote& quote, const Account& account) = 0;
	virtual std::string_view name() const = 0;
};

/// Table-style NAV statistics: mean is taken relative to the reference, the
/// percentage compares the last point with the reference.
struct NavSummary {
	double final_nav = 0.0;
	double nav_pct = 0.0;
	double mean = 0.0;
	double sigma = 0.0;
};

NavSummary summarize(std::span<const NavPoint> series, double reference = 1e5);

struct BacktestResult {
	std::vector<NavPoint> nav;
	std::vector<ExecutionReport> reports;
	std::vector<TradePosition> closed;
	std::vector<TradePosition> open;
	NavSummary summary;
};

BacktestResult run_backtest(const data::TickStream& stream, Strategy& strategy, const StrategyConfig& cfg);

/// Replays a fixed directive sequence (one per quote).
BacktestResult replay(const data::TickStream& stream, std::span<const Directive> directives,
                      const StrategyConfig& cfg);

/// Final NAV per spread for one directive sequence replayed on mid-preserving
/// re-spread copies of the stream.
std::map<double, double> spread_sweep(const data::TickStream& stream, std::span<const Directive> directives,
                                      std::span<const double> spreads, const StrategyConfig& cfg);

void write_nav_csv(std::ostream& out, std::span<const NavPoint> series);
void write_execution_log(std::ostream& out, std::span<const ExecutionReport> reports);

} // namespace stringmom::backtest
