#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "esn/errors.hpp"
#include "esn/metrics.hpp"
#include "esn/rng.hpp"

namespace {

std::vector<double> sine_series(std::size_t t, int period, double offset) {
    std::vector<double> y(t);
    for (std::size_t i = 0; i < t; ++i) {
        y[i] = offset + std::sin(2.0 * M_PI * static_cast<double>(i) / period);
    }
    return y;
}

}  // namespace

TEST_CASE("smape hand oracles") {
    CHECK(esn::smape({10.0, 20.0}, {10.0, 20.0}) == 0.0);
    CHECK(esn::smape({100.0}, {50.0}) == doctest::Approx(66.66666666666667).epsilon(1e-12));
    CHECK(esn::smape({100.0}, {-100.0}) == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(esn::smape({0.0}, {0.0}) == 0.0);  // zero-denominator term contributes nothing
    CHECK_THROWS_AS(esn::smape({1.0}, {1.0, 2.0}), esn::DataError);
}

TEST_CASE("smape is symmetric and bounded") {
    esn::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> a(8), f(8);
        for (auto& v : a) v = rng.uniform(-50.0, 50.0);
        for (auto& v : f) v = rng.uniform(-50.0, 50.0);
        const double ab = esn::smape(a, f);
        CHECK(ab == esn::smape(f, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 200.0);
    }
}

TEST_CASE("mase hand oracle and guards") {
    const std::vector<double> train = {1, 2, 3, 4, 2, 3, 4, 5};
    CHECK(esn::mase({3.0, 4.0}, {4.0, 6.0}, train, 4) == 1.5);
    CHECK(esn::mase({3.0, 4.0}, {3.0, 4.0}, train, 4) == 0.0);

    CHECK_THROWS_AS(esn::mase({1.0}, {1.0}, {5.0, 6.0, 5.0, 6.0}, 2), esn::DataError);
    CHECK_THROWS_AS(esn::mase({1.0}, {1.0}, {1.0, 2.0}, 4), esn::DataError);
}

TEST_CASE("mase is scale invariant") {
    esn::Rng rng(17);
    std::vector<double> train(30), actual(6), forecast(6);
    for (auto& v : train) v = rng.uniform(10.0, 100.0);
    for (auto& v : actual) v = rng.uniform(10.0, 100.0);
    for (auto& v : forecast) v = rng.uniform(10.0, 100.0);
    const double base = esn::mase(actual, forecast, train, 12);

    for (const double c : {1e-3, 1e3, -7.5}) {
        auto ts = train;
        auto as = actual;
        auto fs = forecast;
        for (auto& v : ts) v *= c;
        for (auto& v : as) v *= c;
        for (auto& v : fs) v *= c;
        const double scaled = esn::mase(as, fs, ts, 12);
        CHECK(std::abs(scaled - base) <= 1e-12 * base);
    }
}

TEST_CASE("decomposition recovers a pure sinusoid plus constant") {
    const auto y = sine_series(120, 12, 40.0);
    const auto parts = esn::decompose_additive(y, 12);
    for (std::size_t i = 12; i + 12 < y.size(); ++i) {
        CHECK(std::abs(parts.remainder[i]) < 1e-6);
        CHECK(std::abs(parts.trend[i] - 40.0) < 1e-6);
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(parts.trend[i] + parts.seasonal[i] + parts.remainder[i] ==
              doctest::Approx(y[i]).epsilon(1e-10));
    }
}

TEST_CASE("decomposition of a pure line has no seasonal or remainder") {
    std::vector<double> y(80);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 3.0 + 2.0 * static_cast<double>(i);
    const auto parts = esn::decompose_additive(y, 12);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::abs(parts.seasonal[i]) < 1e-9);
        CHECK(std::abs(parts.remainder[i]) < 1e-9);
    }
}

TEST_CASE("decomposition recovers constructed trend plus seasonal") {
    const int m = 4;
    std::vector<double> seasonal_pattern = {2.0, -1.0, 0.5, -1.5};
    std::vector<double> y(60);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 10.0 + 0.5 * static_cast<double>(i) +
               seasonal_pattern[i % static_cast<std::size_t>(m)];
    }
    const auto parts = esn::decompose_additive(y, m);
    for (std::size_t i = 4; i + 4 < y.size(); ++i) {
        CHECK(std::abs(parts.remainder[i]) < 1e-6);
        CHECK(std::abs(parts.seasonal[i] - seasonal_pattern[i % 4]) < 1e-6);
    }
    CHECK_THROWS_AS(esn::decompose_additive({1.0, 2.0, 3.0}, 4), esn::DataError);
}

TEST_CASE("strength diagnostics on canonical fixtures") {
    // Noiseless line: remainder is identically zero.
    std::vector<double> line(100);
    for (std::size_t i = 0; i < line.size(); ++i) line[i] = static_cast<double>(i);
    const auto line_parts = esn::decompose_additive(line, 12);
    const auto ft = esn::strength_of_trend(line_parts);
    CHECK(ft.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(ft.degenerate);

    // Noiseless sawtooth: flat trend, all variation is seasonal.
    std::vector<double> saw(96);
    for (std::size_t i = 0; i < saw.size(); ++i) saw[i] = static_cast<double>(i % 12);
    const auto saw_parts = esn::decompose_additive(saw, 12);
    const auto fs = esn::strength_of_seasonality(saw_parts);
    CHECK(fs.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(fs.degenerate);
    const auto saw_trend = esn::strength_of_trend(saw_parts);
    CHECK(saw_trend.degenerate);
    CHECK(saw_trend.value == 0.0);

    // Seeded white noise: both strengths stay small.
    esn::Rng rng(31337);
    std::vector<double> noise(500);
    for (auto& v : noise) v = rng.normal();
    const auto noise_parts = esn::decompose_additive(noise, 12);
    CHECK(esn::strength_of_trend(noise_parts).value < 0.3);
    CHECK(esn::strength_of_seasonality(noise_parts).value < 0.3);
}

TEST_CASE("describe computes type-7 quartiles and sample deviation") {
    const auto s = esn::describe({1.0, 2.0, 3.0, 4.0});
    CHECK(s.q1 == doctest::Approx(1.75));
    CHECK(s.median == doctest::Approx(2.5));
    CHECK(s.q3 == doctest::Approx(3.25));
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);

    const auto t = esn::describe({1.0, 2.0, 3.0});
    CHECK(t.mean == doctest::Approx(2.0));
    CHECK(t.median == doctest::Approx(2.0));
    CHECK(t.std_dev == doctest::Approx(1.0));

    const auto single = esn::describe({7.0});
    CHECK(single.n == 1);
    CHECK(single.mean == 7.0);
    CHECK(single.median == 7.0);
    CHECK(single.std_dev == 0.0);

    CHECK_THROWS_AS(esn::describe({}), esn::DataError);
}

TEST_CASE("aggregate groups by model and counts degenerate records") {
    std::vector<esn::AccuracyRecord> records;
    records.push_back({"s1", "B", 1.0, 10.0, 0.1});
    records.push_back({"s2", "B", 2.0, 12.0, 0.1});
    records.push_back({"s3", "B", 3.0, 14.0, 0.1});
    records.push_back({"s1", "A", 0.5, 9.0, 0.2});
    records.push_back({"s2", "A", std::nullopt, 11.0, 0.2});

    const auto rows = esn::aggregate(records);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].model_id == "A");  // mean MASE 0.5 < 2.0
    CHECK(rows[0].n == 2);
    CHECK(rows[0].n_degenerate == 1);
    CHECK(rows[0].mase.n == 1);
    CHECK(rows[1].model_id == "B");
    CHECK(rows[1].mase.mean == doctest::Approx(2.0));
    CHECK(rows[1].mase.median == doctest::Approx(2.0));
    CHECK(rows[1].mase.std_dev == doctest::Approx(1.0));
    CHECK(rows[1].total_elapsed == doctest::Approx(0.3).epsilon(1e-9));

    CHECK_THROWS_AS(esn::aggregate({}), esn::DataError);
}
