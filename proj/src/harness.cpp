#include "aopu/harness.hpp"

#include "aopu/baseline.hpp"
#include "aopu/error.hpp"
#include "aopu/linalg.hpp"
#include "aopu/model.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <sstream>
#include <thread>

namespace aopu::harness {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t shuffle_seed(std::uint64_t seed, std::size_t epoch) noexcept {
    return splitmix64(splitmix64(seed ^ 0x53485546464C45ull) + epoch);
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(m.row(rows[i]).begin(), m.row(rows[i]).end(), out.row(i).begin());
    }
    return out;
}

double mse_of(const Matrix& y, const Matrix& yhat) {
    double acc = 0.0;
    const auto a = y.data();
    const auto b = yhat.data();
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

Metrics eval_metrics(const Matrix& y, const Matrix& yhat) {
    if (!yhat.all_finite()) return {kNaN, kNaN, kNaN};
    return metrics(y.data(), yhat.data());
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::string_view strategy_name(Strategy s) noexcept { return s == Strategy::Best ? "best" : "final"; }

Strategy parse_strategy(std::string_view name) {
    if (name == "best") return Strategy::Best;
    if (name == "final") return Strategy::Final;
    throw InvalidInput("unknown strategy '" + std::string(name) + "' (expected best or final)");
}

data::Dataset load_source(const DataSource& src) {
    if (src.kind == DataSource::Kind::Synthetic) return data::synth_generate(src.synth);
    data::CsvSchema schema;
    if (src.preset == "debutanizer") {
        schema = data::debutanizer_schema();
        if (src.target_col != 0 && src.target_col != schema.target_col) {
            throw InvalidInput("debutanizer preset has a single target column (7)");
        }
    } else if (src.preset == "sru") {
        schema = data::sru_schema(src.target_col == 0 ? 5 : src.target_col);
    } else if (src.preset == "generic") {
        if (src.columns == 0 || src.n_inputs == 0) {
            throw InvalidInput("generic CSV needs the column count and the number of inputs");
        }
        schema = {src.columns, src.n_inputs, src.target_col == 0 ? src.n_inputs : src.target_col, std::nullopt};
        if (schema.target_col < schema.n_inputs || schema.target_col >= schema.columns) {
            throw InvalidInput("generic CSV target column must follow the inputs");
        }
    } else {
        throw InvalidInput("unknown dataset preset '" + src.preset + "'");
    }
    return data::load_csv(src.path, schema);
}

double default_lr(ModelKind kind) noexcept { return kind == ModelKind::Aopu ? 1.0 : AdamConfig{}.lr; }

nlohmann::json to_json(const TrainConfig& c) {
    nlohmann::json ds;
    if (c.dataset.kind == DataSource::Kind::Synthetic) {
        ds = {{"kind", "synthetic"},
              {"n", c.dataset.synth.n},
              {"d", c.dataset.synth.d},
              {"noise", c.dataset.synth.noise},
              {"nonlinear", c.dataset.synth.nonlinear},
              {"seed", c.dataset.synth.seed}};
    } else {
        ds = {{"kind", "csv"},
              {"path", c.dataset.path.string()},
              {"preset", c.dataset.preset},
              {"target_col", c.dataset.target_col}};
    }
    return {{"dataset", ds},
            {"model", model_kind_name(c.model)},
            {"bs", c.bs},
            {"seq", c.seq},
            {"hidden", c.hidden},
            {"activation", activation_name(c.activation)},
            {"layer_norm", c.layer_norm},
            {"lr", c.lr},
            {"epochs", c.epochs},
            {"strategy", strategy_name(c.strategy)},
            {"seed", c.seed},
            {"split", {c.split.train, c.split.val, c.split.test}},
            {"curve_every", c.curve_every}};
}

Metrics metrics(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) throw InvalidInput("metrics: y and ŷ lengths differ");
    if (y.size() < 2) throw InvalidInput("metrics: need at least 2 samples");
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double ss_res = 0.0, ss_tot = 0.0, ape = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - yhat[i];
        ss_res += r * r;
        ss_tot += (y[i] - mean) * (y[i] - mean);
        ape += std::abs(r / y[i]);
    }
    if (ss_tot == 0.0) throw InvalidInput("metrics: R² is undefined for a constant target");
    return {ss_res / n, 100.0 * ape / n, 1.0 - ss_res / ss_tot};
}

StabilityIndices stability_report(std::span<const double> curve) {
    if (curve.size() < 4) throw InvalidInput("stability_report: need at least 4 curve points");
    const std::size_t start = curve.size() / 2;
    const auto tail = curve.subspan(start);
    const Summary s = summarize(tail);
    double worst = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i) worst = std::max(worst, curve[i] - curve[i - 1]);
    return {s.std, worst};
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) return {};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

RunReport train_run(const TrainConfig& config) { return train_run(config, load_source(config.dataset)); }

RunReport train_run(const TrainConfig& config, const data::Dataset& raw) {
    const auto t0 = std::chrono::steady_clock::now();
    if (config.bs == 0) throw InvalidInput("train: batch size must be positive");
    if (config.epochs == 0) throw InvalidInput("train: epochs must be positive");
    if (config.curve_every == 0) throw InvalidInput("train: curve interval must be positive");

    const data::PreparedData prep = data::prepare(raw, config.seq, config.split);
    const auto& tr = prep.parts.train;
    if (tr.count() < config.bs) {
        throw InvalidInput("train: batch size " + std::to_string(config.bs) + " exceeds the " +
                           std::to_string(tr.count()) + " training windows");
    }
    auto aug = std::make_shared<const Augmenter>(
        AugmentConfig{tr.dim(), config.hidden, config.activation, config.layer_norm, config.seed});
    const Matrix x_tr = aug->augment(tr.features);
    const Matrix x_va = aug->augment(prep.parts.val.features);
    const Matrix x_te = aug->augment(prep.parts.test.features);
    const Matrix& y_tr = tr.targets;
    const Matrix& y_va = prep.parts.val.targets;
    const Matrix& y_te = prep.parts.test.targets;

    RunReport rep;
    rep.config = config;

    const bool is_aopu = config.model == ModelKind::Aopu;
    AopuModel aopu;
    RvflnnModel rvfl;
    if (is_aopu) {
        aopu = AopuModel(aug->output_dim(), 1, config.lr, aug);
    } else {
        AdamConfig adam;
        adam.lr = config.lr;
        rvfl = RvflnnModel(aug->output_dim(), 1, adam, aug);
    }
    auto weights = [&]() -> const Matrix& { return is_aopu ? aopu.w_tilde : rvfl.w_tilde; };
    auto predict = [&](const Matrix& x) { return matmul_tn(x, weights()); };

    rep.val_initial = mse_of(y_va, predict(x_va));
    Matrix best_w;
    double rr_sum = 0.0;
    std::size_t rr_count = 0;
    double rr_min = std::numeric_limits<double>::infinity();
    std::string failure;

    try {
        for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
            const auto order = data::batches(tr.count(), config.bs, true, shuffle_seed(config.seed, epoch), true);
            for (const auto& idx : order) {
                const Matrix xb = gather_columns(x_tr, idx);
                const Matrix yb = gather_rows(y_tr, idx);
                if (is_aopu) {
                    const StepReport s = step(aopu, xb, yb);
                    rr_sum += s.rr;
                    ++rr_count;
                    rr_min = std::min(rr_min, s.rr);
                    rep.last_rr = s.rr;
                } else {
                    rvflnn_step(rvfl, xb, yb);
                }
                ++rep.iterations;
                if (rep.iterations % config.curve_every == 0) {
                    const double v = mse_of(y_va, predict(x_va));
                    rep.curve.push_back({rep.iterations, v});
                    if (!std::isfinite(v)) throw DivergenceError("validation MSE became non-finite", rep.last_rr);
                }
            }
            const double v = mse_of(y_va, predict(x_va));
            rep.epoch_val.push_back(v);
            if (!std::isfinite(v)) throw DivergenceError("validation MSE became non-finite", rep.last_rr);
            if (!(v >= rep.val_best)) {
                rep.val_best = v;
                rep.best_epoch = epoch;
                best_w = weights();
            }
        }
    } catch (const DivergenceError& e) {
        rep.diverged = true;
        failure = e.what();
        if (e.rank_ratio()) rep.last_rr = *e.rank_ratio();
    }

    if (rr_count > 0) {
        rep.mean_rr = rr_sum / static_cast<double>(rr_count);
        rep.min_rr = rr_min;
    }
    if (!rep.diverged) {
        rep.val_final = rep.epoch_val.empty() ? rep.val_initial : rep.epoch_val.back();
        rep.test_final = eval_metrics(y_te, predict(x_te));
        rep.improved = rep.val_final < rep.val_initial;
    }
    if (!best_w.empty()) rep.test_best = eval_metrics(y_te, matmul_tn(x_te, best_w));
    rep.best_beats_final_on_test = rep.test_best.mse <= rep.test_final.mse;
    if (config.strategy == Strategy::Best) {
        rep.test = rep.test_best;
        rep.checkpoint = best_w;
    } else {
        rep.test = rep.test_final;
        if (!rep.diverged) rep.checkpoint = weights();
    }

    std::vector<double> curve;
    for (const auto& p : rep.curve) curve.push_back(p.val_mse);
    if (curve.size() < 4) curve = rep.epoch_val;
    if (curve.size() >= 4 && std::all_of(curve.begin(), curve.end(), [](double v) { return std::isfinite(v); })) {
        rep.stability = stability_report(curve);
    }

    const std::string rr_text = is_aopu ? "mean batch RR " + fmt(rep.mean_rr) : "RR not tracked for RVFLNN";
    if (rep.diverged) {
        rep.diagnosis = "diverged after " + std::to_string(rep.iterations) + " iterations: " + failure +
                        "; last batch RR " + fmt(rep.last_rr);
    } else if (!rep.improved) {
        rep.diagnosis = "validation MSE did not improve (initial " + fmt(rep.val_initial) + ", final " +
                        fmt(rep.val_final) + "); " + rr_text;
        if (is_aopu) {
            rep.diagnosis += rep.mean_rr < 1.0 ? "; low rank ratio: rank-deficient batches (RR < 1) limit the update"
                                               : "; batches are full rank so RR does not explain it";
        }
    } else {
        rep.diagnosis = "converged; " + rr_text;
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

AggregateReport repeat_experiments(const TrainConfig& config, std::size_t n_seeds, std::size_t threads) {
    return repeat_experiments(config, load_source(config.dataset), n_seeds, threads);
}

AggregateReport repeat_experiments(const TrainConfig& config, const data::Dataset& raw, std::size_t n_seeds,
                                   std::size_t threads) {
    if (n_seeds < 2) throw InvalidInput("repeat: need at least two seeds");
    AggregateReport agg;
    agg.config = config;
    agg.runs.resize(n_seeds);
    std::vector<std::exception_ptr> errors(n_seeds);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n_seeds; i = next++) {
            try {
                TrainConfig c = config;
                c.seed = config.seed + i;
                agg.runs[i] = train_run(c, raw);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, n_seeds);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<double> mse, mape, r2, fi, mr;
    for (const auto& r : agg.runs) {
        mse.push_back(r.test.mse);
        mape.push_back(r.test.mape);
        r2.push_back(r.test.r2);
        fi.push_back(r.stability.fluctuation_index);
        mr.push_back(r.stability.max_regression);
        if (r.diverged) ++agg.diverged;
    }
    agg.mse = summarize(mse);
    agg.mape = summarize(mape);
    agg.r2 = summarize(r2);
    agg.fluctuation_index = summarize(fi);
    agg.max_regression = summarize(mr);
    return agg;
}

std::vector<RrSummary> rr_survey(const data::Dataset& raw, std::span<const std::size_t> bs_grid,
                                 std::span<const std::size_t> seq_grid, const SurveySettings& settings) {
    if (settings.bins == 0) throw InvalidInput("rr_survey: bin count must be positive");
    std::vector<RrSummary> out;
    for (std::size_t seq : seq_grid) {
        const data::PreparedData prep = data::prepare(raw, seq, settings.split);
        const auto& tr = prep.parts.train;
        const Augmenter aug(
            AugmentConfig{tr.dim(), settings.hidden, settings.activation, settings.layer_norm, settings.seed});
        const Matrix x_tr = aug.augment(tr.features);
        for (std::size_t bs : bs_grid) {
            if (bs == 0) throw InvalidInput("rr_survey: batch size must be positive");
            RrSummary s;
            s.bs = bs;
            s.seq = seq;
            s.histogram.assign(settings.bins, 0);
            for (const auto& idx : data::batches(tr.count(), bs, true, shuffle_seed(settings.seed, 1), true)) {
                const double rr = linalg::rank_ratio(gather_columns(x_tr, idx), idx.size());
                s.values.push_back(rr);
                const auto bin = std::min<std::size_t>(
                    settings.bins - 1, static_cast<std::size_t>(rr * static_cast<double>(settings.bins)));
                ++s.histogram[bin];
            }
            s.count = s.values.size();
            const Summary sm = summarize(s.values);
            s.mean = sm.mean;
            s.std = sm.std;
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<AblationRow> ablate(const TrainConfig& config, const data::Dataset& raw,
                                std::span<const Activation> activations, const std::vector<bool>& norms,
                                std::size_t n_seeds, std::size_t threads) {
    if (activations.empty() || norms.empty()) throw InvalidInput("ablate: activation and norm lists must be non-empty");
    std::vector<AblationRow> rows;
    for (Activation a : activations) {
        for (bool ln : norms) {
            TrainConfig c = config;
            c.activation = a;
            c.layer_norm = ln;
            rows.push_back({a, ln, repeat_experiments(c, raw, n_seeds, threads)});
        }
    }
    return rows;
}

}  // namespace aopu::harness
