#include "aopu/data.hpp"

#include "aopu/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace aopu::data {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    if (line.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (true) {
            const auto pos = line.find(',', start);
            cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start)));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
    } else {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            if (i >= line.size()) break;
            const std::size_t j = line.find_first_of(" \t", i);
            cells.push_back(line.substr(i, j == std::string_view::npos ? line.npos : j - i));
            i = j == std::string_view::npos ? line.size() : j;
        }
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

void check_schema(const CsvSchema& schema) {
    if (schema.n_inputs == 0 || schema.n_inputs > schema.columns) throw InvalidInput("schema: bad input count");
    if (schema.target_col < schema.n_inputs || schema.target_col >= schema.columns) {
        throw InvalidInput("schema: target column must follow the input columns");
    }
}

}  // namespace

CsvSchema debutanizer_schema() { return {8, 7, 7, 2394}; }

CsvSchema sru_schema(std::size_t target) {
    if (target != 5 && target != 6) throw InvalidInput("SRU target column must be 5 (H2S) or 6 (SO2)");
    return {7, 5, target, 10080};
}

Dataset parse_csv(const std::string& text, const CsvSchema& schema) {
    check_schema(schema);
    Dataset ds;
    ds.n_inputs = schema.n_inputs;
    ds.target_col = schema.target_col;

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool first = true;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty()) continue;
        const auto cells = split_cells(content);
        if (cells.size() != schema.columns) {
            throw WrongColumnCount("line " + std::to_string(line_no) + ": expected " + std::to_string(schema.columns) +
                                   " columns, found " + std::to_string(cells.size()));
        }
        std::vector<std::optional<double>> parsed;
        parsed.reserve(cells.size());
        for (auto c : cells) parsed.push_back(parse_number(c));
        const bool is_header = first && std::none_of(parsed.begin(), parsed.end(), [](const auto& p) { return p.has_value(); });
        first = false;
        if (is_header) {
            for (auto c : cells) ds.names.emplace_back(c);
            continue;
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parsed[c]) {
                throw NonNumericCell("line " + std::to_string(line_no) + ", column " + std::to_string(c) +
                                     ": '" + std::string(cells[c]) + "' is not a number");
            }
            values.push_back(*parsed[c]);
        }
        ++rows;
    }
    if (rows == 0) throw EmptyFile("no data rows");
    if (schema.expected_rows && rows != *schema.expected_rows) {
        throw DataError("expected " + std::to_string(*schema.expected_rows) + " rows, found " + std::to_string(rows));
    }
    if (ds.names.empty()) {
        for (std::size_t c = 0; c < schema.columns; ++c) ds.names.push_back("c" + std::to_string(c));
    }
    ds.values = Matrix(rows, schema.columns, std::move(values));
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), schema);
}

ScalerStats fit_scaler(const Dataset& ds, std::size_t row_begin, std::size_t row_end) {
    if (row_end > ds.n_rows() || row_begin >= row_end) throw InvalidInput("fit_scaler: empty or invalid row range");
    ScalerStats stats{std::vector<double>(ds.n_cols(), 0.0), std::vector<double>(ds.n_cols(), 1.0)};
    const double n = static_cast<double>(row_end - row_begin);
    for (std::size_t c = 0; c < ds.n_cols(); ++c) {
        if (c >= ds.n_inputs && c != ds.target_col) continue;
        double mean = 0.0;
        for (std::size_t r = row_begin; r < row_end; ++r) mean += ds.values(r, c);
        mean /= n;
        double var = 0.0;
        for (std::size_t r = row_begin; r < row_end; ++r) {
            const double d = ds.values(r, c) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        if (!(sd > 0.0)) {
            const std::string name = c < ds.names.size() ? ds.names[c] : "c" + std::to_string(c);
            throw ZeroVariance("column '" + name + "' has zero variance on the training rows");
        }
        stats.mean[c] = mean;
        stats.std[c] = sd;
    }
    return stats;
}

Dataset standardize(const Dataset& ds, const ScalerStats& stats) {
    if (stats.mean.size() != ds.n_cols() || stats.std.size() != ds.n_cols()) {
        throw InvalidInput("standardize: stats do not match column count");
    }
    Dataset out = ds;
    for (std::size_t r = 0; r < out.n_rows(); ++r) {
        auto row = out.values.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - stats.mean[c]) / stats.std[c];
    }
    out.stats = stats;
    return out;
}

WindowedSet window(const Dataset& ds, std::size_t seq) {
    if (seq == 0) throw InvalidInput("window: sequence length must be >= 1");
    if (seq > ds.n_rows()) {
        throw InvalidInput("window: sequence length " + std::to_string(seq) + " exceeds " +
                           std::to_string(ds.n_rows()) + " rows");
    }
    const std::size_t n = ds.n_rows() - seq + 1;
    const std::size_t v = ds.n_inputs;
    WindowedSet ws{Matrix(seq * v, n), Matrix(n, 1), seq, v};
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t t = 0; t < seq; ++t) {
            const auto src = ds.values.row(k + t);
            for (std::size_t j = 0; j < v; ++j) ws.features(t * v + j, k) = src[j];
        }
        ws.targets(k, 0) = ds.values(k + seq - 1, ds.target_col);
    }
    return ws;
}

std::array<std::size_t, 3> split_counts(std::size_t n, const SplitRatios& ratios) {
    if (ratios.shuffle) throw InvalidInput("split: only chronological splits are supported");
    if (!(ratios.train > 0.0 && ratios.val > 0.0 && ratios.test > 0.0)) {
        throw InvalidInput("split: ratios must be positive");
    }
    if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) throw InvalidInput("split: ratios must sum to 1");
    // Small slack so that e.g. 0.6·10 lands on 6 rather than 5.
    const auto part = [n](double r) { return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9)); };
    const std::size_t train = part(ratios.train);
    const std::size_t val = part(ratios.val);
    if (train + val >= n || train == 0 || val == 0) {
        throw InvalidInput("split: " + std::to_string(n) + " windows leave an empty partition");
    }
    return {train, val, n - train - val};
}

namespace {

WindowedSet slice(const WindowedSet& ws, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    WindowedSet out{gather_columns(ws.features, idx), Matrix(end - begin, ws.targets.cols()), ws.seq, ws.n_inputs};
    for (std::size_t i = begin; i < end; ++i)
        for (std::size_t c = 0; c < ws.targets.cols(); ++c) out.targets(i - begin, c) = ws.targets(i, c);
    return out;
}

}  // namespace

Split split(const WindowedSet& ws, const SplitRatios& ratios) {
    const auto [train, val, test] = split_counts(ws.count(), ratios);
    return {slice(ws, 0, train), slice(ws, train, train + val), slice(ws, train + val, train + val + test)};
}

std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t bs, bool shuffle, std::uint64_t seed,
                                              bool drop_last) {
    if (bs == 0) throw InvalidInput("batches: batch size must be >= 1");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (shuffle) {
        std::mt19937_64 gen(seed);
        std::shuffle(order.begin(), order.end(), gen);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += bs) {
        const std::size_t end = std::min(n, start + bs);
        if (drop_last && end - start < bs) break;
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

Dataset synth_generate(const SynthSpec& spec) {
    if (spec.n == 0 || spec.d == 0) throw InvalidInput("synth: n and d must be >= 1");
    if (!(spec.noise >= 0.0)) throw InvalidInput("synth: noise must be >= 0");
    std::mt19937_64 gen(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Dataset ds;
    ds.n_inputs = spec.d;
    ds.target_col = spec.d;
    ds.true_weights.resize(spec.d);
    for (double& w : ds.true_weights) w = normal(gen);
    if (spec.nonlinear) {
        ds.true_mixing.resize(spec.d);
        for (double& v : ds.true_mixing) v = normal(gen) / std::sqrt(static_cast<double>(spec.d));
    }

    const double phi = kSynthArCoefficient;
    const double innovation = std::sqrt(1.0 - phi * phi);
    ds.values = Matrix(spec.n, spec.d + 1);
    std::vector<double> state(spec.d);
    for (double& s : state) s = normal(gen);
    for (std::size_t t = 0; t < spec.n; ++t) {
        if (t > 0) {
            for (double& s : state) s = phi * s + innovation * normal(gen);
        }
        double y = 0.0;
        double mix = 0.0;
        for (std::size_t j = 0; j < spec.d; ++j) {
            ds.values(t, j) = state[j];
            y += ds.true_weights[j] * state[j];
            if (spec.nonlinear) mix += ds.true_mixing[j] * state[j];
        }
        if (spec.nonlinear) y += std::tanh(mix);
        if (spec.noise > 0.0) y += spec.noise * normal(gen);
        ds.values(t, spec.d) = y;
    }
    for (std::size_t j = 0; j < spec.d; ++j) ds.names.push_back("x" + std::to_string(j));
    ds.names.emplace_back("y");
    return ds;
}

PreparedData prepare(const Dataset& raw, std::size_t seq, const SplitRatios& ratios) {
    if (seq == 0 || seq > raw.n_rows()) throw InvalidInput("prepare: invalid sequence length");
    const std::size_t n_windows = raw.n_rows() - seq + 1;
    const auto counts = split_counts(n_windows, ratios);
    // Training windows cover raw rows [0, train + seq − 1).
    const ScalerStats stats = fit_scaler(raw, 0, counts[0] + seq - 1);
    const Dataset scaled = standardize(raw, stats);
    return {stats, split(window(scaled, seq), ratios)};
}

}  // namespace aopu::data
