#pragma once

#include "stringmom/config.hpp"
#include "stringmom/evaluator.hpp"
#include "stringmom/pipeline.hpp"
#include "stringmom/string_core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace stringmom::app {

inline constexpr std::string_view version = "0.1.0";

/// `set_id,l_s,m,Q,func,phase,excess_mean,sigma,ratio`; an undefined ratio
/// is written as `undefined`.
void write_scores_csv(std::ostream& out, std::span<const strings::StringParams> sets,
                      std::span<const eval::SharpeScore> scores);

/// `tau,fuzzy_spin,realized_spin`.
void write_spin_predictions_csv(std::ostream& out, std::span<const SpinPrediction> predictions);

/// CRC-32 (IEEE) of a file's bytes.
std::uint32_t file_crc32(const std::filesystem::path& path);

/**
 * Writes the run bundle: nav.csv, executions.csv, spread_hist.csv,
 * trades_per_day.csv, spin_hist.csv, scores.csv and the momentum histograms
 * for PMBCS models, spin_predictions.csv when the replica diagnostic ran,
 * and manifest.json (config echo, version, seed, row counts, checksums).
 * Returns the files written, manifest last.
 */
std::vector<std::filesystem::path> write_bundle(const RunOutcome& outcome, const RunConfig& cfg,
                                                const std::filesystem::path& dir);

} // namespace stringmom::app
