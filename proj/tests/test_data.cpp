#include "aopu/baseline.hpp"
#include "aopu/data.hpp"
#include "aopu/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

using namespace aopu;
using namespace aopu::data;

namespace {

CsvSchema schema3() { return {3, 2, 2, std::nullopt}; }

}  // namespace

TEST_CASE("csv parsing") {
    const Dataset a = parse_csv("a,b,y\n1,2,3\n4,5,6\n", schema3());
    CHECK(a.n_rows() == 2);
    CHECK(a.names == std::vector<std::string>{"a", "b", "y"});
    CHECK(a.values(1, 2) == 6.0);
    CHECK(a.n_inputs == 2);
    CHECK(a.target_col == 2);

    const Dataset b = parse_csv("1 2 3\n\t4  5   6\n\n", schema3());
    CHECK(b.n_rows() == 2);
    CHECK(b.values(1, 0) == 4.0);

    const Dataset c = parse_csv("1e-3,-2.5,+7\n", schema3());
    CHECK(c.values(0, 0) == 0.001);
    CHECK(c.values(0, 2) == 7.0);

    CHECK_THROWS_AS(parse_csv("", schema3()), EmptyFile);
    CHECK_THROWS_AS(parse_csv("a,b,y\n", schema3()), EmptyFile);
    CHECK_THROWS_AS(parse_csv("1,2\n", schema3()), WrongColumnCount);
    CHECK_THROWS_AS(parse_csv("1,2,3\n4,x,6\n", schema3()), NonNumericCell);
    CHECK_THROWS_AS(parse_csv("1,2,3\n", CsvSchema{3, 2, 2, 5}), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", schema3()), DataError);
}

TEST_CASE("csv file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "aopu_test_data.csv";
    {
        std::ofstream out(path);
        out << "u,v,t\n";
        for (int i = 0; i < 5; ++i) out << i << ',' << 0.5 * i << ',' << i * i << '\n';
    }
    const Dataset ds = load_csv(path, schema3());
    CHECK(ds.n_rows() == 5);
    CHECK(ds.values(4, 2) == 16.0);
    std::filesystem::remove(path);
}

TEST_CASE("dataset schemas") {
    const CsvSchema deb = debutanizer_schema();
    CHECK(deb.columns == 8);
    CHECK(deb.n_inputs == 7);
    CHECK(deb.target_col == 7);
    CHECK(deb.expected_rows == 2394);
    CHECK(sru_schema(5).n_inputs == 5);
    CHECK(sru_schema(6).target_col == 6);
    CHECK(sru_schema().expected_rows == 10080);
    CHECK_THROWS_AS(sru_schema(4), InvalidInput);
}

TEST_CASE("scaler") {
    const Dataset ds = parse_csv("1,10,0\n2,20,0\n3,30,1\n", CsvSchema{3, 2, 2, std::nullopt});
    const ScalerStats st = fit_scaler(ds, 0, 3);
    CHECK(st.mean[0] == doctest::Approx(2.0));
    const Dataset z = standardize(ds, st);
    CHECK(z.values(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(z.values(1, 0) == doctest::Approx(0.0));
    CHECK(z.values(2, 1) == doctest::Approx(1.2247).epsilon(1e-4));
    CHECK(z.stats.has_value());

    try {
        (void)fit_scaler(parse_csv("a,b,y\n1,5,0\n2,5,1\n", schema3()), 0, 2);
        FAIL("expected ZeroVariance");
    } catch (const ZeroVariance& e) {
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
    // constant target on the training rows
    CHECK_THROWS_AS((void)fit_scaler(ds, 0, 2), ZeroVariance);
}

TEST_CASE("scaler is fitted on train rows only") {
    const Dataset raw = synth_generate({200, 3, 0.1, false, 5});
    const PreparedData p = prepare(raw, 4);
    const auto counts = split_counts(raw.n_rows() - 3, {});
    const std::size_t train_rows = counts[0] + 3;
    const ScalerStats ref = fit_scaler(raw, 0, train_rows);
    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        CHECK(p.stats.mean[c] == ref.mean[c]);
        CHECK(p.stats.std[c] == ref.std[c]);
    }
}

TEST_CASE("windows") {
    const Dataset one = parse_csv("1,0\n2,1\n3,0\n4,1\n", CsvSchema{2, 1, 1, std::nullopt});
    const WindowedSet w1 = window(one, 1);
    CHECK(w1.count() == 4);
    CHECK(w1.features == Matrix::from_rows({{1, 2, 3, 4}}));
    CHECK(w1.targets == Matrix::column({0, 1, 0, 1}));

    const Dataset two = parse_csv("1,2,9\n3,4,8\n5,6,7\n", CsvSchema{3, 2, 2, std::nullopt});
    const WindowedSet w2 = window(two, 2);
    CHECK(w2.count() == 2);
    CHECK(w2.dim() == 4);
    CHECK(w2.features.col(0) == Matrix::column({1, 2, 3, 4}));
    CHECK(w2.features.col(1) == Matrix::column({3, 4, 5, 6}));
    CHECK(w2.targets == Matrix::column({8, 7}));

    CHECK_THROWS_AS(window(two, 0), InvalidInput);
    CHECK_THROWS_AS(window(two, 4), InvalidInput);

    Dataset deb;
    deb.values = Matrix(2394, 8);
    deb.n_inputs = 7;
    deb.target_col = 7;
    const WindowedSet wd = window(deb, 48);
    CHECK(wd.count() == 2394 - 48 + 1);
    CHECK(wd.count() == 2347);
    CHECK(wd.dim() == 336);
}

TEST_CASE("chronological split") {
    CHECK(split_counts(10, {}) == std::array<std::size_t, 3>{6, 2, 2});
    CHECK(split_counts(2347, {}) == std::array<std::size_t, 3>{1408, 469, 470});
    SplitRatios shuffled;
    shuffled.shuffle = true;
    CHECK_THROWS_AS(split_counts(10, shuffled), InvalidInput);
    CHECK_THROWS_AS(split_counts(10, SplitRatios{0.5, 0.2, 0.2, false}), InvalidInput);
    CHECK_THROWS_AS(split_counts(2, {}), InvalidInput);

    Dataset ds;
    ds.values = Matrix(10, 2);
    for (std::size_t i = 0; i < 10; ++i) ds.values(i, 0) = ds.values(i, 1) = static_cast<double>(i);
    ds.n_inputs = 1;
    ds.target_col = 1;
    const Split s = split(window(ds, 1));
    CHECK(s.train.count() == 6);
    CHECK(s.val.targets == Matrix::column({6, 7}));
    CHECK(s.test.targets == Matrix::column({8, 9}));
}

TEST_CASE("batches") {
    const auto one = batches(100, 64, false, 0, true);
    CHECK(one.size() == 1);
    CHECK(one[0].size() == 64);
    CHECK(batches(100, 64, false, 0, false).size() == 2);
    CHECK(batches(100, 64, false, 0, false)[1].size() == 36);
    CHECK(batches(10, 64, false, 0, true).empty());

    const auto ordered = batches(7, 3, false, 0, false);
    CHECK(ordered[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(ordered[2] == std::vector<std::size_t>{6});

    const auto s1 = batches(50, 10, true, 9, true), s2 = batches(50, 10, true, 9, true), s3 = batches(50, 10, true, 10, true);
    CHECK(s1 == s2);
    CHECK(s1 != s3);
    std::vector<std::size_t> all;
    for (const auto& b : s1) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> iota(50);
    std::iota(iota.begin(), iota.end(), 0);
    CHECK(all == iota);
    CHECK_THROWS_AS(batches(5, 0, false, 0, true), InvalidInput);
}

TEST_CASE("synthetic generator") {
    const SynthSpec spec{3000, 4, 0.0, false, 17};
    const Dataset a = synth_generate(spec), b = synth_generate(spec);
    CHECK(content_hash(a.values) == content_hash(b.values));
    CHECK(a.n_cols() == 5);
    CHECK(a.names.back() == "y");
    CHECK(a.true_weights.size() == 4);

    // noise-free: a linear fit on the same time step recovers w exactly
    Matrix x(4, a.n_rows()), y(1, a.n_rows());
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
        for (std::size_t c = 0; c < 4; ++c) x(c, r) = a.values(r, c);
        y(0, r) = a.values(r, 4);
    }
    const LinearMve fit = linear_mve_fit(x, y);
    for (std::size_t c = 0; c < 4; ++c) CHECK(fit.w(0, c) == doctest::Approx(a.true_weights[c]).epsilon(1e-9));

    // AR(1) with coefficient 0.8 and unit variance
    double m = 0, v = 0, cov = 0;
    const std::size_t n = a.n_rows();
    for (std::size_t r = 0; r < n; ++r) m += a.values(r, 0) / n;
    for (std::size_t r = 0; r < n; ++r) v += (a.values(r, 0) - m) * (a.values(r, 0) - m) / n;
    for (std::size_t r = 1; r < n; ++r) cov += (a.values(r, 0) - m) * (a.values(r - 1, 0) - m) / (n - 1);
    CHECK(v == doctest::Approx(1.0).epsilon(0.15));
    CHECK(cov / v == doctest::Approx(kSynthArCoefficient).epsilon(0.06));

    CHECK_THROWS_AS(synth_generate({0, 4, 0.0, false, 1}), InvalidInput);
    CHECK_THROWS_AS(synth_generate({10, 4, -1.0, false, 1}), InvalidInput);
}

TEST_CASE("synthetic noise floor") {
    const double sigma = 0.5;
    const Dataset a = synth_generate({20000, 3, sigma, false, 18});
    Matrix x(3, a.n_rows()), y(1, a.n_rows());
    double ym = 0;
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
        for (std::size_t c = 0; c < 3; ++c) x(c, r) = a.values(r, c);
        y(0, r) = a.values(r, 3);
        ym += y(0, r) / a.n_rows();
    }
    const LinearMve fit = linear_mve_fit(x, y);
    const Matrix f = fit.predict(x);
    double sse = 0, sst = 0;
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
        sse += (y(0, r) - f(0, r)) * (y(0, r) - f(0, r));
        sst += (y(0, r) - ym) * (y(0, r) - ym);
    }
    CHECK(sse / a.n_rows() == doctest::Approx(sigma * sigma).epsilon(0.05));
    const double ceiling = 1.0 - sigma * sigma / (sst / a.n_rows());
    CHECK(1.0 - sse / sst == doctest::Approx(ceiling).epsilon(0.01));
}
