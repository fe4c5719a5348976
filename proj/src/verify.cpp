#include "aopu/verify.hpp"

#include "aopu/error.hpp"
#include "aopu/linalg.hpp"
#include "aopu/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace aopu::verify {

namespace {

using Rng = std::mt19937_64;

Matrix gaussian(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    Matrix m(r, c);
    for (double& v : m.data()) v = n(rng);
    return m;
}

Matrix low_rank(std::size_t r, std::size_t c, std::size_t k, Rng& rng) {
    return matmul_nt(gaussian(r, k, rng), gaussian(c, k, rng));
}

double rel(const Matrix& a, const Matrix& b) {
    const double denom = frobenius_norm(b);
    return frobenius_norm(a - b) / (denom > 0.0 ? denom : 1.0);
}

double mirror_objective(const Matrix& w, const Matrix& d, const Matrix& gram_pinv) {
    return inner(w, d) - 0.5 * inner(d, matmul(gram_pinv, d));
}

Matrix unit_direction(std::size_t r, std::size_t c, Rng& rng, double norm) {
    Matrix g = gaussian(r, c, rng);
    return (norm / frobenius_norm(g)) * g;
}

double conditional_mse(const DiscretePmf& pmf, std::size_t i, double c) {
    double mass = 0.0, acc = 0.0;
    for (std::size_t j = 0; j < pmf.ys.size(); ++j) {
        mass += pmf.prob(i, j);
        acc += pmf.prob(i, j) * (pmf.ys[j] - c) * (pmf.ys[j] - c);
    }
    return acc / mass;
}

double row_mass(const DiscretePmf& pmf, std::size_t i) {
    double mass = 0.0;
    for (std::size_t j = 0; j < pmf.ys.size(); ++j) mass += pmf.prob(i, j);
    return mass;
}

DiscretePmf random_pmf(Rng& rng) {
    std::uniform_int_distribution<std::size_t> size(2, 5);
    std::uniform_int_distribution<int> cell(0, 400);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    DiscretePmf pmf;
    const std::size_t nx = size(rng), ny = size(rng);
    for (std::size_t i = 0; i < nx; ++i) pmf.xs.push_back(static_cast<double>(i));
    for (std::size_t j = 0; j < ny; ++j) pmf.ys.push_back(cell(rng) / 100.0 - 2.0);
    pmf.prob = Matrix(nx, ny);
    double total = 0.0;
    for (double& p : pmf.prob.data()) {
        p = weight(rng) < 0.2 ? 0.0 : weight(rng);
        total += p;
    }
    if (total == 0.0) {
        pmf.prob(0, 0) = 1.0;
        total = 1.0;
    }
    for (double& p : pmf.prob.data()) p /= total;
    return pmf;
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    return {{"check", r.name},
            {"passed", r.passed},
            {"measured_error", num(r.measured_error)},
            {"tolerance", r.tolerance},
            {"details", r.details}};
}

Matrix finite_diff_gradient(const std::function<double(const Matrix&)>& f, const Matrix& point, double eps) {
    Matrix grad(point.rows(), point.cols());
    Matrix probe = point;
    for (std::size_t k = 0; k < point.size(); ++k) {
        const double orig = probe.data()[k];
        probe.data()[k] = orig + eps;
        const double up = f(probe);
        probe.data()[k] = orig - eps;
        const double down = f(probe);
        probe.data()[k] = orig;
        grad.data()[k] = (up - down) / (2.0 * eps);
    }
    return grad;
}

CheckReport check_fim_equals_grad_m(const GaussianOutputSpec& spec, const FimOptions& opt) {
    const Matrix& x = spec.x_tilde;
    const std::size_t p = x.rows(), b = x.cols(), o = spec.w_tilde.cols();
    if (spec.w_tilde.rows() != p) throw InvalidInput("fim: W̃ rows must match x̃ rows");
    if (opt.n_samples == 0 || opt.replicates == 0) throw InvalidInput("fim: need samples and replicates");
    const std::size_t q = p * o;

    // ∂m/∂W̃ by finite differences on the (linear) map m(W̃) = x̃x̃ᵀW̃.
    const Matrix gram = matmul_nt(x, x);
    Matrix jac(q, q);
    for (std::size_t k = 0; k < q; ++k) {
        Matrix col_k = finite_diff_gradient(
            [&](const Matrix& w) {
                const Matrix m = matmul(gram, w);
                return m.data()[k];
            },
            spec.w_tilde, 1e-3);
        for (std::size_t l = 0; l < q; ++l) jac(k, l) = col_k.data()[l];
    }
    Matrix analytic(q, q);
    for (std::size_t c = 0; c < o; ++c) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) analytic(i * o + c, j * o + c) = gram(i, j);
        }
    }
    const double jac_err = max_abs_diff(jac, analytic);

    const Matrix mean = matmul_tn(x, spec.w_tilde);  // b × o
    auto estimate = [&](std::size_t n, Rng& rng) {
        std::normal_distribution<double> nd;
        Matrix fim(q, q);
        Matrix y(b, o);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t k = 0; k < y.size(); ++k) y.data()[k] = mean.data()[k] + nd(rng);
            const Matrix score = matmul(x, y - mean);  // ∇_W̃ log p, p × o
            const auto sv = score.data();
            for (std::size_t k = 0; k < q; ++k) {
                if (sv[k] == 0.0) continue;
                auto row = fim.row(k);
                for (std::size_t l = 0; l < q; ++l) row[l] += sv[k] * sv[l];
            }
        }
        return (1.0 / static_cast<double>(n)) * fim;
    };
    const double scale = frobenius_norm(analytic);
    auto error_of = [&](const Matrix& est) {
        const double diff = frobenius_norm(est - analytic);
        return scale > 0.0 ? diff / scale : diff;
    };

    Rng rng(opt.seed);
    const double err = error_of(estimate(opt.n_samples, rng));
    double ms_n = 0.0, ms_2n = 0.0;
    for (std::size_t r = 0; r < opt.replicates; ++r) {
        const double e1 = error_of(estimate(opt.n_samples, rng));
        const double e2 = error_of(estimate(2 * opt.n_samples, rng));
        ms_n += e1 * e1;
        ms_2n += e2 * e2;
    }
    const double rms_n = std::sqrt(ms_n / static_cast<double>(opt.replicates));
    const double rms_2n = std::sqrt(ms_2n / static_cast<double>(opt.replicates));
    const bool zero_case = scale == 0.0;
    const bool shrinks = zero_case ? rms_2n == 0.0 && rms_n == 0.0 : rms_2n < rms_n;

    CheckReport r;
    r.name = "fim_equals_grad_m";
    r.measured_error = err;
    r.tolerance = opt.tolerance;
    r.passed = (zero_case ? err == 0.0 : err < opt.tolerance) && shrinks && jac_err < 1e-6;
    r.details = {{"n_samples", opt.n_samples},
                 {"relative_frobenius_error", err},
                 {"rms_error_n", rms_n},
                 {"rms_error_2n", rms_2n},
                 {"error_shrinks_when_doubled", shrinks},
                 {"grad_m_jacobian_error", jac_err},
                 {"replicates", opt.replicates}};
    return r;
}

CheckReport check_mirror_map(const Matrix& x, const Matrix& w, std::size_t perturbations, std::uint64_t seed) {
    if (w.rows() != x.rows()) throw InvalidInput("mirror map: W̃ rows must match x̃ rows");
    const Matrix gram = symmetrize(matmul_nt(x, x));
    if (linalg::rank(gram) < gram.rows()) {
        throw PreconditionError("mirror map: x̃x̃ᵀ is singular (rank " + std::to_string(linalg::rank(gram)) + " < " +
                                std::to_string(gram.rows()) + ")");
    }
    const Matrix gram_pinv = linalg::pinv_symmetric(gram);
    const Matrix d_star = matmul(gram, w);
    const double residual = frobenius_norm(w - matmul(gram_pinv, d_star));
    const double best = mirror_objective(w, d_star, gram_pinv);

    Rng rng(seed);
    std::size_t beaten = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    const double step = 0.1 * std::max(1.0, frobenius_norm(d_star));
    for (std::size_t k = 0; k < perturbations; ++k) {
        const Matrix d = d_star + unit_direction(w.rows(), w.cols(), rng, step);
        const double gap = best - mirror_objective(w, d, gram_pinv);
        min_gap = std::min(min_gap, gap);
        if (gap < 0.0) ++beaten;
    }

    CheckReport r;
    r.name = "mirror_map";
    r.measured_error = residual;
    r.tolerance = 1e-8;
    r.passed = residual <= 1e-8 && beaten == 0;
    r.details = {{"stationarity_residual", residual},
                 {"perturbations", perturbations},
                 {"perturbations_beating_d_star", beaten},
                 {"min_objective_gap", min_gap}};
    return r;
}

CheckReport check_coherence(const CoherenceInstance& inst, const CoherenceOptions& opt) {
    const Matrix& x = inst.x_tilde;
    const Matrix& d_star = inst.d_star;
    if (d_star.rows() != x.rows()) throw InvalidInput("coherence: D* rows must match x̃ rows");
    const std::size_t p = x.rows(), o = d_star.cols();
    const linalg::GramInverse gram(x);
    const Matrix recon_star = reconstruct(gram, x, d_star);
    const Matrix& y_clean = recon_star;
    auto ip = [&](const Matrix& y, const Matrix& d) {
        return inner(truncated_gradient(gram, x, y, d), d - d_star);
    };

    Rng rng(opt.seed);
    const double scale = std::max(1.0, frobenius_norm(d_star));
    double min_ip = std::numeric_limits<double>::infinity();
    std::size_t negatives = 0, iff_violations = 0;
    for (std::size_t k = 0; k < opt.n_samples; ++k) {
        const Matrix d = d_star + gaussian(p, o, rng, scale / std::sqrt(static_cast<double>(p * o)));
        const double v = ip(y_clean, d);
        min_ip = std::min(min_ip, v);
        if (v < -1e-10) ++negatives;
        const bool same_recon = frobenius_norm(reconstruct(gram, x, d) - recon_star) <= 1e-8 * scale;
        if ((std::abs(v) <= 1e-8) != same_recon) ++iff_violations;
    }
    const double at_star = ip(y_clean, d_star);

    // Null-space direction: component of a random matrix orthogonal to col(x̃).
    nlohmann::json null_case = {{"available", false}};
    bool null_ok = true;
    if (gram.rank() < p) {
        const Matrix g = gaussian(p, o, rng);
        const Matrix proj = matmul(x, gram.apply(matmul_tn(x, g)));
        const Matrix v = g - proj;
        const Matrix d = d_star + (scale / std::max(frobenius_norm(v), 1e-300)) * v;
        const double inner_v = ip(y_clean, d);
        const double loss_star = loss(y_clean, recon_star);
        const double loss_v = loss(y_clean, reconstruct(gram, x, d));
        null_ok = std::abs(inner_v) <= 1e-8 && std::abs(loss_v - loss_star) <= 1e-10;
        null_case = {{"available", true}, {"inner_product", inner_v}, {"loss_change", loss_v - loss_star}};
    }

    nlohmann::json noisy = nlohmann::json::array();
    bool noisy_ok = true;
    if (inst.noise > 0.0) {
        std::normal_distribution<double> nd(0.0, inst.noise);
        for (int rep = 0; rep < 3; ++rep) {
            const Matrix d = d_star + gaussian(p, o, rng, scale / std::sqrt(static_cast<double>(p * o)));
            const double clean = ip(y_clean, d);
            double sum = 0.0, sum_sq = 0.0;
            Matrix y = y_clean;
            for (std::size_t s = 0; s < opt.noise_samples; ++s) {
                for (std::size_t k = 0; k < y.size(); ++k) y.data()[k] = y_clean.data()[k] + nd(rng);
                const double v = ip(y, d);
                sum += v;
                sum_sq += v * v;
            }
            const double n = static_cast<double>(opt.noise_samples);
            const double mean = sum / n;
            const double se = std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
            const bool within = std::abs(mean - clean) <= 3.0 * se + 1e-12;
            noisy_ok = noisy_ok && within;
            noisy.push_back({{"noise_free", clean}, {"noisy_mean", mean}, {"standard_error", se}, {"within_3_sigma", within}});
        }
    }

    CheckReport r;
    r.name = "coherence";
    r.measured_error = std::max(0.0, -min_ip);
    r.tolerance = 1e-10;
    r.passed = negatives == 0 && iff_violations == 0 && std::abs(at_star) <= 1e-12 && null_ok && noisy_ok;
    r.details = {{"samples", opt.n_samples},
                 {"min_inner_product", min_ip},
                 {"negative_inner_products", negatives},
                 {"equality_iff_violations", iff_violations},
                 {"inner_product_at_d_star", at_star},
                 {"rank_ratio", gram.rank_ratio()},
                 {"null_space_case", null_case},
                 {"noisy_cases", noisy}};
    return r;
}

double mve_grid_margin(const DiscretePmf& pmf, double grid_step) {
    validate_pmf(pmf);
    const auto [lo_it, hi_it] = std::minmax_element(pmf.ys.begin(), pmf.ys.end());
    const auto steps = static_cast<long>(std::ceil((*hi_it - *lo_it) / grid_step));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pmf.xs.size(); ++i) {
        if (row_mass(pmf, i) <= 0.0) continue;
        const double cm = conditional_mse(pmf, i, conditional_mean_mve(pmf, pmf.xs[i]));
        double best_grid = std::numeric_limits<double>::infinity();
        for (long k = 0; k <= steps; ++k) {
            best_grid = std::min(best_grid, conditional_mse(pmf, i, *lo_it + grid_step * static_cast<double>(k)));
        }
        worst = std::max(worst, cm - best_grid);
    }
    return worst;
}

CheckReport check_mve_optimality(const MveOptions& opt) {
    Rng rng(opt.seed);
    constexpr double kTie = 1e-12;

    double worst_margin = -std::numeric_limits<double>::infinity();
    double worst_cross = 0.0;
    std::size_t pmf_failures = 0;
    for (std::size_t k = 0; k < opt.n_pmfs; ++k) {
        const DiscretePmf pmf = random_pmf(rng);
        const double margin = mve_grid_margin(pmf, opt.grid_step);
        worst_margin = std::max(worst_margin, margin);
        if (margin > kTie) ++pmf_failures;
        // Exact cross term E[(y − E[y|x])(E[y|x] − f(x))] for a random f.
        std::normal_distribution<double> nd;
        double cross = 0.0;
        for (std::size_t i = 0; i < pmf.xs.size(); ++i) {
            if (row_mass(pmf, i) <= 0.0) continue;
            const double cm = conditional_mean_mve(pmf, pmf.xs[i]);
            const double f = nd(rng);
            for (std::size_t j = 0; j < pmf.ys.size(); ++j) cross += pmf.prob(i, j) * (pmf.ys[j] - cm) * (cm - f);
        }
        worst_cross = std::max(worst_cross, std::abs(cross));
    }

    // Two-state example: p(y | x = 0) uniform on {0, 2}.
    DiscretePmf two{{0.0, 1.0}, {0.0, 2.0}, Matrix::from_rows({{0.25, 0.25}, {0.1, 0.4}})};
    const double two_margin = mve_grid_margin(two, opt.grid_step);
    const double two_mean = conditional_mean_mve(two, 0.0);

    // Deterministic y = g(x): conditional mean is g and every matching estimator ties at 0.
    DiscretePmf det{{0.0, 1.0, 2.0}, {-1.0, 0.5, 3.0}, Matrix::from_rows({{0.3, 0, 0}, {0, 0.5, 0}, {0, 0, 0.2}})};
    double det_mse = 0.0;
    for (std::size_t i = 0; i < det.xs.size(); ++i) {
        det_mse += row_mass(det, i) * conditional_mse(det, i, conditional_mean_mve(det, det.xs[i]));
    }

    // Monte-Carlo cross term on the two-state pmf with a fixed competitor f(x) = x.
    std::discrete_distribution<std::size_t> cells(two.prob.data().begin(), two.prob.data().end());
    double mc_sum = 0.0, mc_sq = 0.0;
    const std::size_t mc_n = 10000;
    for (std::size_t s = 0; s < mc_n; ++s) {
        const std::size_t c = cells(rng);
        const std::size_t i = c / two.ys.size(), j = c % two.ys.size();
        const double cm = conditional_mean_mve(two, two.xs[i]);
        const double v = (two.ys[j] - cm) * (cm - two.xs[i]);
        mc_sum += v;
        mc_sq += v * v;
    }
    const double mc_mean = mc_sum / mc_n;
    const double mc_se = std::sqrt(std::max(0.0, mc_sq / mc_n - mc_mean * mc_mean) / mc_n);
    const bool mc_ok = std::abs(mc_mean) <= 3.0 * mc_se;

    // Gaussian linear instance.
    const std::size_t d = 3, o = 2, n = opt.linear_samples;
    const Matrix mix = gaussian(d, d, rng);
    const Matrix x = matmul(mix, gaussian(d, n, rng)) + matmul(Matrix(d, 1, 0.5), Matrix(1, n, 1.0));
    const Matrix a = gaussian(o, d, rng);
    const Matrix y = matmul(a, x) + matmul(Matrix::column({1.0, -2.0}), Matrix(1, n, 1.0)) + gaussian(o, n, rng, 0.3);
    const LinearMve fit = linear_mve_fit(x, y);

    // Independent oracle: least squares with an intercept row via the normal equations.
    Eigen::MatrixXd xa(d + 1, n), ya(o, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < d; ++i) xa(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = x(i, c);
        xa(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(c)) = 1.0;
        for (std::size_t i = 0; i < o; ++i) ya(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = y(i, c);
    }
    const Eigen::MatrixXd normal = (xa * xa.transpose()).ldlt().solve(xa * ya.transpose()).transpose();
    double ne_err = 0.0;
    for (std::size_t i = 0; i < o; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            ne_err = std::max(ne_err, std::abs(fit.w(i, j) - normal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
        ne_err = std::max(ne_err, std::abs(fit.offset(i, 0) - normal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d))));
    }

    auto sample_mse = [&](const Matrix& w) {
        Matrix xbar(d, 1), ybar(o, 1);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t c = 0; c < n; ++c) xbar(i, 0) += x(i, c) / static_cast<double>(n);
        }
        for (std::size_t i = 0; i < o; ++i) {
            for (std::size_t c = 0; c < n; ++c) ybar(i, 0) += y(i, c) / static_cast<double>(n);
        }
        const Matrix b = ybar - matmul(w, xbar);
        const Matrix resid = y - (matmul(w, x) + matmul(b, Matrix(1, n, 1.0)));
        return inner(resid, resid) / static_cast<double>(n);
    };
    const double mse_star = sample_mse(fit.w);
    std::size_t beaten = 0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < opt.perturbations; ++k) {
        const double gap = sample_mse(fit.w + unit_direction(o, d, rng, 0.1)) - mse_star;
        min_gap = std::min(min_gap, gap);
        if (gap < 0.0) ++beaten;
    }

    CheckReport r;
    r.name = "mve_optimality";
    r.measured_error = std::max({worst_margin, 0.0, ne_err});
    r.tolerance = 1e-8;
    r.passed = pmf_failures == 0 && two_margin <= kTie && std::abs(two_mean - 1.0) < 1e-15 && det_mse <= 1e-24 &&
               worst_cross < 1e-12 && mc_ok && ne_err <= 1e-8 && beaten == 0;
    r.details = {{"random_pmfs", opt.n_pmfs},
                 {"grid_step", opt.grid_step},
                 {"pmfs_beaten_by_grid", pmf_failures},
                 {"worst_grid_margin", worst_margin},
                 {"two_state_conditional_mean", two_mean},
                 {"two_state_grid_margin", two_margin},
                 {"deterministic_mse", det_mse},
                 {"max_exact_cross_term", worst_cross},
                 {"mc_cross_term", {{"mean", mc_mean}, {"standard_error", mc_se}, {"within_3_sigma", mc_ok}}},
                 {"normal_equations_max_abs_error", ne_err},
                 {"linear_perturbations", opt.perturbations},
                 {"perturbations_beating_w_mve", beaten},
                 {"min_mse_gap", min_gap}};
    return r;
}

CheckReport check_natural_gradient(std::size_t instances, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> batch(1, 6);
    double worst_full = 0.0, worst_commute = 0.0, worst_deficient = 0.0;
    std::size_t full = 0, deficient = 0;
    for (std::size_t k = 0; k < instances; ++k) {
        const std::size_t b = batch(rng);
        std::uniform_int_distribution<std::size_t> extra(0, 8 - b > 2 ? 2 : 8 - b);
        const std::size_t p = b + extra(rng);
        const Matrix x = gaussian(p, b, rng);
        const Matrix y = gaussian(b, 1, rng);
        const Matrix w = gaussian(p, 1, rng);
        const Matrix d = matmul(x, matmul_tn(x, w));
        const linalg::GramInverse gram(x);
        if (gram.rank() == b) {
            worst_full = std::max(worst_full, rel(truncated_gradient(gram, x, y, d), natural_gradient_reference(x, y, w)));
            ++full;
        }

        // Arbitrary rank, including p < b and rank-deficient products.
        std::uniform_int_distribution<std::size_t> dims(1, 8);
        const std::size_t pr = dims(rng), br = dims(rng);
        std::uniform_int_distribution<std::size_t> rk(1, std::min(pr, br));
        const Matrix xr = low_rank(pr, br, rk(rng), rng);
        const Matrix lhs = matmul(xr, linalg::pinv_symmetric(matmul_tn(xr, xr)));
        const Matrix rhs = matmul(linalg::pinv_symmetric(matmul_nt(xr, xr)), xr);
        worst_commute = std::max(worst_commute, rel(lhs, rhs));
        const linalg::GramInverse gr(xr);
        if (gr.rank() < br) {
            const Matrix yr = gaussian(br, 1, rng);
            const Matrix wr = gaussian(pr, 1, rng);
            const Matrix dr = matmul(xr, matmul_tn(xr, wr));
            worst_deficient =
                std::max(worst_deficient, rel(truncated_gradient(gr, xr, yr, dr), natural_gradient_reference(xr, yr, wr)));
            ++deficient;
        }
    }
    CheckReport r;
    r.name = "natural_gradient";
    r.measured_error = std::max(worst_full, worst_commute);
    r.tolerance = 1e-8;
    r.passed = worst_full < 1e-8 && worst_commute < 1e-8 && std::isfinite(worst_deficient);
    r.details = {{"instances", instances},
                 {"full_rank_instances", full},
                 {"max_relative_deviation_full_rank", worst_full},
                 {"max_relative_commutation_error", worst_commute},
                 {"rank_deficient_instances", deficient},
                 {"max_relative_deviation_rank_deficient", worst_deficient}};
    return r;
}

std::vector<CheckReport> run_all(std::uint64_t seed) {
    Rng rng(seed + 17);
    std::vector<CheckReport> out;
    out.push_back(check_natural_gradient(200, seed + 5));

    FimOptions fim;
    fim.seed = seed + 1;
    CheckReport id = check_fim_equals_grad_m({Matrix::identity(3), gaussian(3, 1, rng)}, fim);
    id.name += "/identity";
    out.push_back(std::move(id));
    CheckReport rnd = check_fim_equals_grad_m({gaussian(4, 3, rng), gaussian(4, 1, rng)}, fim);
    rnd.name += "/random";
    out.push_back(std::move(rnd));
    FimOptions fim_zero = fim;
    fim_zero.replicates = 1;
    fim_zero.n_samples = 1000;
    CheckReport zero = check_fim_equals_grad_m({Matrix(3, 2), gaussian(3, 1, rng)}, fim_zero);
    zero.name += "/zero";
    out.push_back(std::move(zero));

    CheckReport mm = check_mirror_map(gaussian(4, 10, rng), gaussian(4, 2, rng), 100, seed + 2);
    out.push_back(std::move(mm));

    CoherenceOptions co;
    co.seed = seed + 3;
    CheckReport full = check_coherence({gaussian(4, 4, rng), gaussian(4, 1, rng), 0.0}, co);
    full.name += "/full_rank";
    out.push_back(std::move(full));
    CheckReport wide = check_coherence({gaussian(8, 4, rng), gaussian(8, 1, rng), 0.0}, co);
    wide.name += "/null_space";
    out.push_back(std::move(wide));
    CheckReport noisy = check_coherence({gaussian(6, 4, rng), gaussian(6, 1, rng), 0.5}, co);
    noisy.name += "/noisy";
    out.push_back(std::move(noisy));

    MveOptions mve;
    mve.seed = seed + 4;
    out.push_back(check_mve_optimality(mve));
    return out;
}

}  // namespace aopu::verify
