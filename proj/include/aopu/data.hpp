#pragma once

#include "aopu/matrix.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace aopu::data {

// Per-column moments fitted on the training rows. Columns that are neither
// an input nor the target keep mean 0 / std 1 (left untouched).
struct ScalerStats {
    std::vector<double> mean;
    std::vector<double> std;
};

struct Dataset {
    Matrix values;  // n_rows × n_cols, one row per time step
    std::vector<std::string> names;
    std::size_t n_inputs = 0;  // inputs are columns [0, n_inputs)
    std::size_t target_col = 0;
    std::optional<ScalerStats> stats;
    // Generating coefficients for synthetic data (empty otherwise).
    std::vector<double> true_weights;
    std::vector<double> true_mixing;

    std::size_t n_rows() const noexcept { return values.rows(); }
    std::size_t n_cols() const noexcept { return values.cols(); }
};

struct CsvSchema {
    std::size_t columns = 0;
    std::size_t n_inputs = 0;
    std::size_t target_col = 0;
    std::optional<std::size_t> expected_rows;
};

// 2394 rows: 7 inputs followed by the butane-content target.
CsvSchema debutanizer_schema();
// 10080 rows: 5 inputs followed by two analyzer outputs (H2S, SO2).
// `target` picks one of the two; the other never feeds the inputs.
CsvSchema sru_schema(std::size_t target = 5);

// Comma- or whitespace-separated numbers, optional header row (a first row in
// which no cell parses as a number). Parsing is locale-independent. Throws
// EmptyFile, WrongColumnCount or NonNumericCell.
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);
Dataset parse_csv(const std::string& text, const CsvSchema& schema);

// Fits mean/std over rows [row_begin, row_end) for inputs and target. Throws
// ZeroVariance naming the offending column.
ScalerStats fit_scaler(const Dataset& ds, std::size_t row_begin, std::size_t row_end);
// Applies (v − mean)/std column-wise and records the stats. Never refits.
Dataset standardize(const Dataset& ds, const ScalerStats& stats);

// Sliding windows: column k of `features` stacks input rows k..k+seq−1 in
// time order (all variables of one step are adjacent); the target is taken at
// row k+seq−1.
struct WindowedSet {
    Matrix features;  // (seq·n_inputs) × N
    Matrix targets;   // N × 1
    std::size_t seq = 0;
    std::size_t n_inputs = 0;

    std::size_t count() const noexcept { return features.cols(); }
    std::size_t dim() const noexcept { return features.rows(); }
};

WindowedSet window(const Dataset& ds, std::size_t seq);

struct SplitRatios {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
    bool shuffle = false;  // only chronological splits are accepted
};

// floor(train·N), floor(val·N), remainder to test.
std::array<std::size_t, 3> split_counts(std::size_t n, const SplitRatios& ratios);

struct Split {
    WindowedSet train;
    WindowedSet val;
    WindowedSet test;
};

Split split(const WindowedSet& ws, const SplitRatios& ratios = {});

// Index batches over [0, n). Shuffling uses a seeded permutation; otherwise
// time order. With drop_last the short tail batch is discarded.
std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t bs, bool shuffle, std::uint64_t seed,
                                              bool drop_last);

struct SynthSpec {
    std::size_t n = 2000;
    std::size_t d = 5;
    double noise = 0.0;
    bool nonlinear = false;
    std::uint64_t seed = 0;
};

inline constexpr double kSynthArCoefficient = 0.8;

// Each input follows a stationary unit-variance AR(1) process; the target is
// wᵀx (+ tanh(vᵀx) when nonlinear) + N(0, noise²) at the same time step.
Dataset synth_generate(const SynthSpec& spec);

// Everything a training run needs for one sequence length: train-only
// scaler, windows, chronological split.
struct PreparedData {
    ScalerStats stats;
    Split parts;
};

PreparedData prepare(const Dataset& raw, std::size_t seq, const SplitRatios& ratios = {});

}  // namespace aopu::data
