#pragma once

#include "aopu/harness.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace aopu::report {

// One row per run: seed, strategy, test metrics under both strategies,
// validation summary, RR summary, stability indices, divergence flag.
void write_metrics_csv(const std::filesystem::path& path, std::span<const harness::RunReport> runs);
// seed, iteration, val_mse
void write_curve_csv(const std::filesystem::path& path, std::span<const harness::RunReport> runs);
// bs, seq, bin_lo, bin_hi, count
void write_rr_hist_csv(const std::filesystem::path& path, std::span<const harness::RrSummary> survey);
// One row per activation × layer-norm cell with mean/std of the test metrics.
void write_ablation_csv(const std::filesystem::path& path, std::span<const harness::AblationRow> rows);

nlohmann::json to_json(const harness::RunReport& run);
nlohmann::json to_json(const harness::AggregateReport& agg);

// FNV-1a over the file bytes.
std::uint64_t file_hash(const std::filesystem::path& path);

// Echoes the config, lists every written file with its content hash and
// records wall time.
void write_manifest(const std::filesystem::path& path, const nlohmann::json& config,
                    std::span<const std::filesystem::path> files, double wall_seconds);

}  // namespace aopu::report
