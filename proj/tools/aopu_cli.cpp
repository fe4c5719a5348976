#include "aopu/checkpoint.hpp"
#include "aopu/error.hpp"
#include "aopu/harness.hpp"
#include "aopu/kernels.hpp"
#include "aopu/report.hpp"
#include "aopu/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace aopu;

namespace {

struct Options {
    std::string dataset = "synth";
    std::string preset = "generic";
    std::size_t target_col = 0;
    std::size_t columns = 0;
    std::size_t inputs = 0;
    data::SynthSpec synth;
    std::size_t bs = 64;
    std::size_t seq = 48;
    std::size_t hidden = 2048;
    std::string activation = "tanh";
    bool layer_norm = false;
    std::vector<double> lr;
    std::size_t epochs = 40;
    std::string strategy = "final";
    std::uint64_t seed = 0;
    std::size_t seeds = 5;
    std::size_t threads = 1;
    std::string model = "aopu";
    std::size_t curve_every = 50;
    std::string out_dir = "out";
    std::string isa;
};

void add_data_flags(CLI::App* app, Options& o) {
    app->add_option("--dataset", o.dataset, "CSV path, or 'synth' for the AR generator");
    app->add_option("--preset", o.preset, "CSV schema: debutanizer | sru | generic");
    app->add_option("--target-col", o.target_col, "Target column (SRU: 5 or 6; generic: any non-input column)");
    app->add_option("--columns", o.columns, "Generic schema: total column count");
    app->add_option("--inputs", o.inputs, "Generic schema: number of leading input columns");
    app->add_option("--synth-n", o.synth.n, "Synthetic rows");
    app->add_option("--synth-d", o.synth.d, "Synthetic input variables");
    app->add_option("--synth-noise", o.synth.noise, "Synthetic noise std");
    app->add_flag("--synth-nonlinear", o.synth.nonlinear, "Add a tanh term to the synthetic target");
    app->add_option("--synth-seed", o.synth.seed, "Synthetic generator seed");
}

void add_train_flags(CLI::App* app, Options& o) {
    add_data_flags(app, o);
    app->add_option("--bs", o.bs, "Batch size");
    app->add_option("--seq", o.seq, "Window length");
    app->add_option("--hidden", o.hidden, "Random features h");
    app->add_option("--activation", o.activation, "Activation name");
    app->add_flag("--layer-norm", o.layer_norm, "Layer-normalize the hidden block");
    app->add_option("--lr", o.lr, "Learning rate(s); several values run a sweep");
    app->add_option("--epochs", o.epochs, "Epochs");
    app->add_option("--strategy", o.strategy, "best | final");
    app->add_option("--seed", o.seed, "Base seed");
    app->add_option("--model", o.model, "aopu | rvflnn");
    app->add_option("--curve-every", o.curve_every, "Iterations between validation samples");
    app->add_option("--out-dir", o.out_dir, "Output directory");
}

harness::DataSource source_of(const Options& o) {
    harness::DataSource src;
    if (o.dataset == "synth") {
        src.kind = harness::DataSource::Kind::Synthetic;
        src.synth = o.synth;
    } else {
        src.kind = harness::DataSource::Kind::Csv;
        src.path = o.dataset;
        src.preset = o.preset;
        src.target_col = o.target_col;
        src.columns = o.columns;
        src.n_inputs = o.inputs;
    }
    return src;
}

harness::TrainConfig config_of(const Options& o, double lr) {
    harness::TrainConfig c;
    c.dataset = source_of(o);
    c.bs = o.bs;
    c.seq = o.seq;
    c.hidden = o.hidden;
    c.activation = parse_activation(o.activation);
    c.layer_norm = o.layer_norm;
    c.model = parse_model_kind(o.model);
    c.lr = lr > 0.0 ? lr : harness::default_lr(c.model);
    c.epochs = o.epochs;
    c.strategy = harness::parse_strategy(o.strategy);
    c.seed = o.seed;
    c.curve_every = o.curve_every;
    return c;
}

std::vector<double> lr_list(const Options& o) { return o.lr.empty() ? std::vector<double>{0.0} : o.lr; }

fs::path run_dir(const Options& o, double lr) {
    if (o.lr.size() <= 1) return o.out_dir;
    std::ostringstream name;
    name << "lr_" << lr;
    return fs::path(o.out_dir) / name.str();
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    fs::create_directories(path.parent_path());
    std::ofstream(path) << j.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_train(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto raw = harness::load_source(source_of(o));
    for (double lr : lr_list(o)) {
        const auto cfg = config_of(o, lr);
        const auto run = harness::train_run(cfg, raw);
        const fs::path dir = run_dir(o, lr);
        std::vector<fs::path> files{dir / "metrics.csv", dir / "curve.csv", dir / "run.json"};
        report::write_metrics_csv(files[0], std::span(&run, 1));
        report::write_curve_csv(files[1], std::span(&run, 1));
        write_json(files[2], report::to_json(run));
        if (!run.checkpoint.empty()) {
            files.push_back(dir / "model.ckpt");
            save_checkpoint(files.back(), {cfg.model, run.checkpoint, harness::to_json(cfg).dump()});
        }
        report::write_manifest(dir / "manifest.json", harness::to_json(cfg), files, seconds_since(t0));
        std::cout << "lr " << cfg.lr << ": test mse " << run.test.mse << " mape " << run.test.mape << " r2 "
                  << run.test.r2 << (run.diverged ? " [diverged]" : "") << "\n  " << run.diagnosis << '\n';
    }
    return 0;
}

int cmd_repeat(const Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto raw = harness::load_source(source_of(o));
    for (double lr : lr_list(o)) {
        const auto cfg = config_of(o, lr);
        const auto agg = harness::repeat_experiments(cfg, raw, o.seeds, o.threads);
        const fs::path dir = run_dir(o, lr);
        std::vector<fs::path> files{dir / "metrics.csv", dir / "curve.csv", dir / "summary.json"};
        report::write_metrics_csv(files[0], agg.runs);
        report::write_curve_csv(files[1], agg.runs);
        write_json(files[2], report::to_json(agg));
        report::write_manifest(dir / "manifest.json", harness::to_json(cfg), files, seconds_since(t0));
        std::cout << "lr " << cfg.lr << ", " << o.seeds << " seeds: r2 " << agg.r2.mean << " ± " << agg.r2.std
                  << ", mse " << agg.mse.mean << " ± " << agg.mse.std << ", diverged " << agg.diverged << '\n';
    }
    return 0;
}

int cmd_survey(const Options& o, const std::vector<std::size_t>& bs, const std::vector<std::size_t>& seq,
               std::size_t bins) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto raw = harness::load_source(source_of(o));
    harness::SurveySettings s;
    s.hidden = o.hidden;
    s.activation = parse_activation(o.activation);
    s.layer_norm = o.layer_norm;
    s.seed = o.seed;
    s.bins = bins;
    const auto survey = harness::rr_survey(raw, bs, seq, s);
    const fs::path dir = o.out_dir;
    std::vector<fs::path> files{dir / "rr_hist.csv", dir / "rr_summary.csv"};
    report::write_rr_hist_csv(files[0], survey);
    {
        std::ofstream out(files[1]);
        out << "bs,seq,batches,mean_rr,std_rr\n";
        for (const auto& r : survey) out << r.bs << ',' << r.seq << ',' << r.count << ',' << r.mean << ',' << r.std << '\n';
    }
    nlohmann::json cfg = {{"dataset", o.dataset}, {"hidden", o.hidden}, {"activation", o.activation},
                          {"layer_norm", o.layer_norm}, {"seed", o.seed}, {"bs", bs}, {"seq", seq}, {"bins", bins}};
    report::write_manifest(dir / "manifest.json", cfg, files, seconds_since(t0));
    for (const auto& r : survey) {
        std::cout << "bs " << std::setw(4) << r.bs << " seq " << std::setw(3) << r.seq << ": mean RR " << r.mean
                  << " over " << r.count << " batches\n";
    }
    return 0;
}

int cmd_ablate(const Options& o, const std::vector<std::string>& acts, const std::vector<int>& norms) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto raw = harness::load_source(source_of(o));
    std::vector<Activation> as;
    if (acts.empty()) {
        as = all_activations();
    } else {
        for (const auto& a : acts) as.push_back(parse_activation(a));
    }
    std::vector<bool> ns;
    for (int n : norms) ns.push_back(n != 0);
    const auto cfg = config_of(o, o.lr.empty() ? 0.0 : o.lr.front());
    const auto rows = harness::ablate(cfg, raw, as, ns, o.seeds, o.threads);
    const fs::path dir = o.out_dir;
    std::vector<fs::path> files{dir / "ablation.csv"};
    report::write_ablation_csv(files[0], rows);
    report::write_manifest(dir / "manifest.json", harness::to_json(cfg), files, seconds_since(t0));
    for (const auto& r : rows) {
        std::cout << std::setw(11) << activation_name(r.activation) << (r.layer_norm ? " +LN" : "    ") << ": r2 "
                  << r.report.r2.mean << " ± " << r.report.r2.std << '\n';
    }
    return 0;
}

int cmd_synth(const Options& o, const std::string& out_path) {
    const auto ds = data::synth_generate(o.synth);
    if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << std::setprecision(17);
    for (std::size_t c = 0; c < ds.n_cols(); ++c) out << (c ? "," : "") << ds.names[c];
    out << '\n';
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < ds.n_cols(); ++c) out << (c ? "," : "") << ds.values(r, c);
        out << '\n';
    }
    std::cout << "wrote " << ds.n_rows() << " rows to " << out_path << '\n';
    return 0;
}

int cmd_verify(const Options& o, bool write) {
    const auto reports = verify::run_all(o.seed);
    bool ok = true;
    nlohmann::json all = nlohmann::json::array();
    for (const auto& r : reports) {
        const auto j = verify::to_json(r);
        std::cout << j.dump() << '\n';
        all.push_back(j);
        ok = ok && r.passed;
    }
    if (write) write_json(fs::path(o.out_dir) / "verify.json", all);
    std::cerr << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AOPU regression unit: training, RR diagnostics and verification"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--isa", o.isa, "Force the kernel path: scalar | avx2");

    auto* train = app.add_subcommand("train", "Train one run");
    add_train_flags(train, o);

    auto* repeat = app.add_subcommand("repeat", "Train across seeds and aggregate");
    add_train_flags(repeat, o);
    repeat->add_option("--seeds", o.seeds, "Number of seeds");
    repeat->add_option("--threads", o.threads, "Worker threads");

    std::vector<std::size_t> bs_grid{64, 128, 288}, seq_grid{16, 24, 32, 40, 48};
    std::size_t bins = 20;
    auto* survey = app.add_subcommand("rr-survey", "Rank Ratio of training batches over a bs × seq grid");
    add_data_flags(survey, o);
    survey->add_option("--bs", bs_grid, "Batch sizes");
    survey->add_option("--seq", seq_grid, "Window lengths");
    survey->add_option("--hidden", o.hidden, "Random features h");
    survey->add_option("--activation", o.activation, "Activation name");
    survey->add_flag("--layer-norm", o.layer_norm, "Layer-normalize the hidden block");
    survey->add_option("--seed", o.seed, "Seed");
    survey->add_option("--bins", bins, "Histogram bins");
    survey->add_option("--out-dir", o.out_dir, "Output directory");

    std::vector<std::string> acts;
    std::vector<int> norms{0, 1};
    auto* abl = app.add_subcommand("ablate", "Activation × layer-norm table");
    add_train_flags(abl, o);
    abl->add_option("--activations", acts, "Activations (default: all)");
    abl->add_option("--norms", norms, "Layer-norm settings to include (0 and/or 1)");
    abl->add_option("--seeds", o.seeds, "Seeds per cell");
    abl->add_option("--threads", o.threads, "Worker threads");

    std::string synth_out = "synth.csv";
    auto* synth = app.add_subcommand("synth", "Write a synthetic AR dataset as CSV");
    add_data_flags(synth, o);
    synth->add_option("--out", synth_out, "Output CSV");

    bool verify_write = false;
    auto* ver = app.add_subcommand("verify", "Run the numerical verification suite");
    ver->add_option("--seed", o.seed, "Seed");
    ver->add_option("--out-dir", o.out_dir, "Directory for verify.json")->each([&](const std::string&) {
        verify_write = true;
    });

    CLI11_PARSE(app, argc, argv);
    try {
        if (!o.isa.empty()) kernels::set_isa(o.isa == "scalar" ? kernels::Isa::Scalar : kernels::Isa::Avx2);
        if (*train) return cmd_train(o);
        if (*repeat) return cmd_repeat(o);
        if (*survey) return cmd_survey(o, bs_grid, seq_grid, bins);
        if (*abl) return cmd_ablate(o, acts, norms);
        if (*synth) return cmd_synth(o, synth_out);
        if (*ver) return cmd_verify(o, verify_write);
    } catch (const aopu::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
