#pragma once

#include "aopu/augment.hpp"
#include "aopu/checkpoint.hpp"
#include "aopu/data.hpp"
#include "aopu/matrix.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace aopu::harness {

enum class Strategy { Best, Final };

std::string_view strategy_name(Strategy s) noexcept;
Strategy parse_strategy(std::string_view name);

// Where a run's rows come from: a CSV file (with a named schema) or the
// synthetic AR generator.
struct DataSource {
    enum class Kind { Csv, Synthetic };
    Kind kind = Kind::Synthetic;
    std::filesystem::path path;
    std::string preset = "generic";  // debutanizer | sru | generic
    std::size_t target_col = 0;      // 0 = preset default
    std::size_t columns = 0;         // generic schema only
    std::size_t n_inputs = 0;        // generic schema only
    data::SynthSpec synth;
};

data::Dataset load_source(const DataSource& src);

struct TrainConfig {
    DataSource dataset;
    std::size_t bs = 64;
    std::size_t seq = 48;
    std::size_t hidden = 2048;
    Activation activation = Activation::Tanh;
    bool layer_norm = false;
    double lr = 1.0;  // 1.0 for AOPU, 0.005 for RVFLNN
    std::size_t epochs = 40;
    Strategy strategy = Strategy::Final;
    std::uint64_t seed = 0;
    ModelKind model = ModelKind::Aopu;
    data::SplitRatios split;
    std::size_t curve_every = 50;  // iterations between validation samples
};

double default_lr(ModelKind kind) noexcept;
nlohmann::json to_json(const TrainConfig& config);

struct Metrics {
    double mse = 0.0;
    double mape = 0.0;
    double r2 = 0.0;
};

// mse, mape (percent, no epsilon guard) and R². Throws InvalidInput on
// length mismatch, fewer than 2 samples, or constant y (R² undefined).
Metrics metrics(std::span<const double> y, std::span<const double> yhat);

struct StabilityIndices {
    double fluctuation_index = 0.0;  // std of the last half of the curve
    double max_regression = 0.0;     // largest rise between consecutive points
};

// Requires at least 4 points.
StabilityIndices stability_report(std::span<const double> curve);

struct CurvePoint {
    std::size_t iteration = 0;
    double val_mse = 0.0;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunReport {
    TrainConfig config;
    Metrics test{kNaN, kNaN, kNaN};  // under config.strategy
    Metrics test_best{kNaN, kNaN, kNaN};
    Metrics test_final{kNaN, kNaN, kNaN};
    double val_initial = kNaN;
    double val_best = kNaN;
    double val_final = kNaN;
    std::size_t best_epoch = 0;
    std::size_t iterations = 0;
    std::vector<CurvePoint> curve;
    std::vector<double> epoch_val;
    StabilityIndices stability{kNaN, kNaN};
    double mean_rr = kNaN;  // AOPU only
    double min_rr = kNaN;
    double last_rr = kNaN;
    bool diverged = false;
    bool improved = false;  // val_final < val_initial
    // Selection is on validation, so this can be false; recorded, not enforced.
    bool best_beats_final_on_test = false;
    std::string diagnosis;
    Matrix checkpoint;  // W̃ selected by the strategy
    double wall_seconds = 0.0;
};

RunReport train_run(const TrainConfig& config);
// Reuses an already loaded dataset (the data does not depend on the seed).
RunReport train_run(const TrainConfig& config, const data::Dataset& raw);

struct Summary {
    double mean = kNaN;
    double std = kNaN;  // population (1/n)
};

Summary summarize(std::span<const double> values);

struct AggregateReport {
    TrainConfig config;
    std::vector<RunReport> runs;  // one per seed, seed = config.seed + i
    Summary mse, mape, r2;
    Summary fluctuation_index, max_regression;
    std::size_t diverged = 0;
};

// Needs n_seeds ≥ 2. Seeds config.seed .. config.seed + n_seeds − 1; each seed varies Ĝ and the
// shuffle order. Runs are independent and may use `threads` workers; the
// result does not depend on the worker count.
AggregateReport repeat_experiments(const TrainConfig& config, std::size_t n_seeds, std::size_t threads = 1);
AggregateReport repeat_experiments(const TrainConfig& config, const data::Dataset& raw, std::size_t n_seeds,
                                   std::size_t threads = 1);

struct RrSummary {
    std::size_t bs = 0;
    std::size_t seq = 0;
    std::vector<std::size_t> histogram;  // equal-width bins over [0, 1]
    std::vector<double> values;
    double mean = kNaN;
    double std = kNaN;
    std::size_t count = 0;
};

struct SurveySettings {
    std::size_t hidden = 2048;
    Activation activation = Activation::Tanh;
    bool layer_norm = false;
    std::uint64_t seed = 0;
    std::size_t bins = 20;
    data::SplitRatios split;
};

// RR of every training batch (shuffled, drop-last) for each (bs, seq).
std::vector<RrSummary> rr_survey(const data::Dataset& raw, std::span<const std::size_t> bs_grid,
                                 std::span<const std::size_t> seq_grid, const SurveySettings& settings);

struct AblationRow {
    Activation activation = Activation::Tanh;
    bool layer_norm = false;
    AggregateReport report;
};

std::vector<AblationRow> ablate(const TrainConfig& config, const data::Dataset& raw,
                                std::span<const Activation> activations, const std::vector<bool>& norms,
                                std::size_t n_seeds, std::size_t threads = 1);

}  // namespace aopu::harness
