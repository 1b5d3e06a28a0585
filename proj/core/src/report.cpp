#include "stringmom/report.hpp"

#include "stringmom/error.hpp"

#include <boost/crc.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <iterator>

namespace stringmom::app {

namespace fs = std::filesystem;

void write_scores_csv(std::ostream& out, std::span<const strings::StringParams> sets,
                      std::span<const eval::SharpeScore> scores) {
	out << "set_id,l_s,m,Q,func,phase,excess_mean,sigma,ratio\n";
	for (const auto& s : scores) {
		const auto& p = sets[s.set_id];
		out << fmt::format("{},{},{},{:.10g},{},{:.10g},{:.10g},{:.10g},{}\n", s.set_id, p.length, p.frequency,
		                   p.exponent, strings::to_string(p.function), p.phase, s.excess_mean, s.sigma,
		                   s.ratio ? fmt::format("{:.10g}", *s.ratio) : std::string("undefined"));
	}
}

void write_spin_predictions_csv(std::ostream& out, std::span<const SpinPrediction> predictions) {
	out << "tau,fuzzy_spin,realized_spin\n";
	for (const auto& p : predictions) {
		out << fmt::format("{},{:.10g},{}\n", p.tau, p.fuzzy_spin, p.realized);
	}
}

std::uint32_t file_crc32(const fs::path& path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw DataError(fmt::format("cannot read '{}'", path.string()));
	}
	const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
	boost::crc_32_type crc;
	crc.process_bytes(bytes.data(), bytes.size());
	return crc.checksum();
}

std::vector<fs::path> write_bundle(const RunOutcome& outcome, const RunConfig& cfg, const fs::path& dir) {
	std::error_code ec;
	fs::create_directories(dir, ec);
	if (ec) {
		throw DataError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
	}

	std::vector<fs::path> written;
	auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
		const auto path = dir / name;
		std::ofstream out(path, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw DataError(fmt::format("cannot write '{}'", path.string()));
		}
		body(out);
		out.close();
		if (!out) {
			throw DataError(fmt::format("write failed for '{}'", path.string()));
		}
		written.push_back(path);
	};

	const auto& r = outcome.result;
	emit("nav.csv", [&](std::ostream& o) { backtest::write_nav_csv(o, r.nav); });
	emit("executions.csv", [&](std::ostream& o) { backtest::write_execution_log(o, r.reports); });
	emit("spread_hist.csv", [&](std::ostream& o) { data::write_histogram_csv(o, outcome.spread_hist); });
	emit("trades_per_day.csv", [&](std::ostream& o) { data::write_histogram_csv(o, outcome.trades_per_day); });
	emit("spin_hist.csv", [&](std::ostream& o) { replica::write_spin_histogram_csv(o, outcome.spin_hist); });
	if (!outcome.sets.empty()) {
		emit("scores.csv", [&](std::ostream& o) { write_scores_csv(o, outcome.sets, outcome.scores); });
	}
	if (outcome.incoming) {
		emit("momentum_incoming.csv", [&](std::ostream& o) { predict::write_histogram_csv(o, *outcome.incoming); });
	}
	if (outcome.outgoing) {
		emit("momentum_outgoing.csv", [&](std::ostream& o) { predict::write_histogram_csv(o, *outcome.outgoing); });
	}
	if (outcome.spin_predictions) {
		emit("spin_predictions.csv",
		     [&](std::ostream& o) { write_spin_predictions_csv(o, *outcome.spin_predictions); });
	}

	nlohmann::json manifest;
	manifest["version"] = version;
	manifest["model"] = outcome.model;
	manifest["seed"] = cfg.seed;
	manifest["ticks"] = outcome.ticks;
	manifest["parameter_sets"] = outcome.sets.size();
	manifest["config"] = cfg.echo;
	manifest["summary"] = {{"final_nav", r.summary.final_nav},
	                       {"nav_pct", r.summary.nav_pct},
	                       {"mean", r.summary.mean},
	                       {"sigma", r.summary.sigma},
	                       {"closed_trades", r.closed.size()},
	                       {"open_trades", r.open.size()},
	                       {"reports", r.reports.size()}};
	nlohmann::json files = nlohmann::json::object();
	for (const auto& path : written) {
		files[path.filename().string()] = {{"crc32", fmt::format("{:08x}", file_crc32(path))},
		                                   {"bytes", fs::file_size(path)}};
	}
	manifest["files"] = files;
	emit("manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; });
	return written;
}

} // namespace stringmom::app
