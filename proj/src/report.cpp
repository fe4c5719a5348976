#include "aopu/report.hpp"

#include "aopu/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace aopu::report {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(10);
    return out;
}

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json metrics_json(const harness::Metrics& m) {
    return {{"mse", num(m.mse)}, {"mape", num(m.mape)}, {"r2", num(m.r2)}};
}

nlohmann::json summary_json(const harness::Summary& s) { return {{"mean", num(s.mean)}, {"std", num(s.std)}}; }

}  // namespace

void write_metrics_csv(const std::filesystem::path& path, std::span<const harness::RunReport> runs) {
    auto out = open_out(path);
    out << "seed,model,strategy,mse,mape,r2,best_mse,best_mape,best_r2,final_mse,final_mape,final_r2,"
           "val_initial,val_best,val_final,best_epoch,iterations,mean_rr,min_rr,fluctuation_index,"
           "max_regression,diverged\n";
    for (const auto& r : runs) {
        out << r.config.seed << ',' << model_kind_name(r.config.model) << ','
            << harness::strategy_name(r.config.strategy) << ',' << r.test.mse << ',' << r.test.mape << ','
            << r.test.r2 << ',' << r.test_best.mse << ',' << r.test_best.mape << ',' << r.test_best.r2 << ','
            << r.test_final.mse << ',' << r.test_final.mape << ',' << r.test_final.r2 << ',' << r.val_initial
            << ',' << r.val_best << ',' << r.val_final << ',' << r.best_epoch << ',' << r.iterations << ','
            << r.mean_rr << ',' << r.min_rr << ',' << r.stability.fluctuation_index << ','
            << r.stability.max_regression << ',' << (r.diverged ? 1 : 0) << '\n';
    }
}

void write_curve_csv(const std::filesystem::path& path, std::span<const harness::RunReport> runs) {
    auto out = open_out(path);
    out << "seed,iteration,val_mse\n";
    for (const auto& r : runs) {
        for (const auto& p : r.curve) out << r.config.seed << ',' << p.iteration << ',' << p.val_mse << '\n';
    }
}

void write_rr_hist_csv(const std::filesystem::path& path, std::span<const harness::RrSummary> survey) {
    auto out = open_out(path);
    out << "bs,seq,bin_lo,bin_hi,count\n";
    for (const auto& s : survey) {
        const double width = 1.0 / static_cast<double>(s.histogram.size());
        for (std::size_t b = 0; b < s.histogram.size(); ++b) {
            out << s.bs << ',' << s.seq << ',' << width * static_cast<double>(b) << ','
                << width * static_cast<double>(b + 1) << ',' << s.histogram[b] << '\n';
        }
    }
}

void write_ablation_csv(const std::filesystem::path& path, std::span<const harness::AblationRow> rows) {
    auto out = open_out(path);
    out << "activation,layer_norm,zero_mean,mse_mean,mse_std,mape_mean,mape_std,r2_mean,r2_std,diverged\n";
    for (const auto& row : rows) {
        const auto& a = row.report;
        out << activation_name(row.activation) << ',' << (row.layer_norm ? 1 : 0) << ','
            << (is_zero_mean(row.activation) ? 1 : 0) << ',' << a.mse.mean << ',' << a.mse.std << ','
            << a.mape.mean << ',' << a.mape.std << ',' << a.r2.mean << ',' << a.r2.std << ',' << a.diverged
            << '\n';
    }
}

nlohmann::json to_json(const harness::RunReport& r) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : r.curve) curve.push_back({p.iteration, num(p.val_mse)});
    nlohmann::json epochs = nlohmann::json::array();
    for (double v : r.epoch_val) epochs.push_back(num(v));
    return {{"config", harness::to_json(r.config)},
            {"test", metrics_json(r.test)},
            {"test_best", metrics_json(r.test_best)},
            {"test_final", metrics_json(r.test_final)},
            {"val_initial", num(r.val_initial)},
            {"val_best", num(r.val_best)},
            {"val_final", num(r.val_final)},
            {"best_epoch", r.best_epoch},
            {"iterations", r.iterations},
            {"mean_rr", num(r.mean_rr)},
            {"min_rr", num(r.min_rr)},
            {"last_rr", num(r.last_rr)},
            {"fluctuation_index", num(r.stability.fluctuation_index)},
            {"max_regression", num(r.stability.max_regression)},
            {"diverged", r.diverged},
            {"improved", r.improved},
            {"best_beats_final_on_test", r.best_beats_final_on_test},
            {"diagnosis", r.diagnosis},
            {"epoch_val", epochs},
            {"curve", curve},
            {"wall_seconds", r.wall_seconds}};
}

nlohmann::json to_json(const harness::AggregateReport& agg) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& r : agg.runs) seeds.push_back(r.config.seed);
    return {{"config", harness::to_json(agg.config)},
            {"seeds", seeds},
            {"mse", summary_json(agg.mse)},
            {"mape", summary_json(agg.mape)},
            {"r2", summary_json(agg.r2)},
            {"fluctuation_index", summary_json(agg.fluctuation_index)},
            {"max_regression", summary_json(agg.max_regression)},
            {"diverged", agg.diverged}};
}

std::uint64_t file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

void write_manifest(const std::filesystem::path& path, const nlohmann::json& config,
                    std::span<const std::filesystem::path> files, double wall_seconds) {
    nlohmann::json listed = nlohmann::json::array();
    for (const auto& f : files) {
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0') << file_hash(f);
        listed.push_back({{"file", f.filename().string()}, {"fnv1a64", hex.str()}});
    }
    auto out = open_out(path);
    out << nlohmann::json{{"config", config}, {"files", listed}, {"wall_seconds", wall_seconds}}.dump(2) << '\n';
}

}  // namespace aopu::report
