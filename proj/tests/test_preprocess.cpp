#include "doctest.h"

#include <cmath>
#include <vector>

#include "esn/errors.hpp"
#include "esn/preprocess.hpp"
#include "esn/rng.hpp"

namespace {

std::vector<double> noise_fixture(std::size_t t, std::uint64_t seed) {
    esn::Rng rng(seed);
    std::vector<double> y(t);
    for (auto& v : y) v = rng.uniform01() - 0.5;
    return y;
}

std::vector<double> linear_trend(std::size_t t) {
    std::vector<double> y(t);
    for (std::size_t i = 0; i < t; ++i) y[i] = static_cast<double>(i + 1);
    return y;
}

/// Plain transcription of the level-KPSS formula, kept independent of the
/// implementation under test.
double kpss_reference(const std::vector<double>& y) {
    const auto t = static_cast<double>(y.size());
    const int lags = static_cast<int>(std::floor(4.0 * std::pow(t / 100.0, 0.25)));

    double mean = 0.0;
    for (const double v : y) mean += v;
    mean /= t;

    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e[i] = y[i] - mean;

    double eta = 0.0;
    {
        double s = 0.0;
        for (const double v : e) {
            s += v;
            eta += s * s;
        }
        eta /= t * t;
    }

    double s2 = 0.0;
    for (const double v : e) s2 += v * v;
    for (int lag = 1; lag <= lags; ++lag) {
        double gamma = 0.0;
        for (std::size_t i = static_cast<std::size_t>(lag); i < e.size(); ++i) {
            gamma += e[i] * e[i - static_cast<std::size_t>(lag)];
        }
        s2 += 2.0 * (1.0 - static_cast<double>(lag) / (lags + 1.0)) * gamma;
    }
    s2 /= t;
    return eta / s2;
}

}  // namespace

TEST_CASE("kpss statistic matches the frozen statsmodels reference values") {
    // Values computed with statsmodels.tsa.stattools.kpss(regression="c",
    // nlags=floor(4*(T/100)^0.25)) on identical fixtures.
    const auto noise = noise_fixture(200, 2024);
    const auto r1 = esn::kpss_test(noise);
    CHECK(r1.lag_truncation == 4);
    CHECK(r1.statistic == doctest::Approx(0.026722276851360652).epsilon(1e-10));
    CHECK_FALSE(r1.reject_stationarity);

    const auto r2 = esn::kpss_test(linear_trend(200));
    CHECK(r2.statistic == doctest::Approx(4.0984525324194765).epsilon(1e-10));
    CHECK(r2.reject_stationarity);

    std::vector<double> quad_diff(199);
    for (std::size_t i = 0; i < quad_diff.size(); ++i) {
        quad_diff[i] = 2.0 * static_cast<double>(i + 1) - 1.0;  // diff of t^2
    }
    const auto r3 = esn::kpss_test(quad_diff);
    CHECK(r3.statistic == doctest::Approx(4.078465106542179).epsilon(1e-10));
    CHECK(r3.reject_stationarity);

    esn::Rng rng(77);
    std::vector<double> walk;
    double level = 0.0;
    for (int i = 0; i < 150; ++i) {
        level += rng.uniform01() - 0.5;
        walk.push_back(level);
    }
    const auto r4 = esn::kpss_test(walk);
    CHECK(r4.statistic == doctest::Approx(2.074729270929976).epsilon(1e-10));
    CHECK(r4.reject_stationarity);
}

TEST_CASE("kpss agrees with an independent transcription on random fixtures") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto y = noise_fixture(40 + 13 * seed, 500 + seed);
        const auto result = esn::kpss_test(y);
        CHECK(result.statistic == doctest::Approx(kpss_reference(y)).epsilon(1e-12));
        CHECK(result.reject_stationarity == (result.statistic > 0.463));
    }
}

TEST_CASE("kpss handles constants, shifts and short input") {
    const std::vector<double> constant(50, 3.25);
    const auto r = esn::kpss_test(constant);
    CHECK(r.statistic == 0.0);
    CHECK_FALSE(r.reject_stationarity);

    const auto y = noise_fixture(80, 9);
    auto shifted = y;
    for (auto& v : shifted) v += 1234.5;
    CHECK(esn::kpss_test(shifted).statistic ==
          doctest::Approx(esn::kpss_test(y).statistic).epsilon(1e-8));

    CHECK_THROWS_AS(esn::kpss_test(std::vector<double>(11, 1.0)), esn::DataError);
}

TEST_CASE("apply_differencing stops at the right order") {
    const auto stationary = noise_fixture(100, 3);
    const auto [d0, rec0] = esn::apply_differencing(stationary);
    CHECK(rec0.diff_order == 0);
    CHECK(d0 == stationary);

    const auto trend = linear_trend(200);
    const auto [d1, rec1] = esn::apply_differencing(trend);
    CHECK(rec1.diff_order == 1);
    REQUIRE(d1.size() == 199);
    for (const double v : d1) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rec1.initial_values == std::vector<double>{1.0});

    std::vector<double> quadratic(200);
    for (std::size_t i = 0; i < quadratic.size(); ++i) {
        const auto x = static_cast<double>(i + 1);
        quadratic[i] = x * x;
    }
    const auto [d2, rec2] = esn::apply_differencing(quadratic);
    CHECK(rec2.diff_order == 2);
    REQUIRE(d2.size() == 198);
    for (const double v : d2) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rec2.initial_values == std::vector<double>{1.0, 4.0});
}

TEST_CASE("differencing never exceeds the maximum order") {
    // A cubic keeps rejecting after two differences; the order is capped.
    std::vector<double> cubic(300);
    for (std::size_t i = 0; i < cubic.size(); ++i) {
        const auto x = static_cast<double>(i + 1);
        cubic[i] = x * x * x;
    }
    const auto [d, rec] = esn::apply_differencing(cubic);
    CHECK(rec.diff_order == 2);
    CHECK(d.size() == 298);
}

TEST_CASE("scale_to_unit maps the training window onto [-0.5, 0.5]") {
    esn::TransformRecord rec;
    CHECK(esn::scale_to_unit({0.0, 10.0}, rec) == std::vector<double>{-0.5, 0.5});
    CHECK(rec.scale_min == 0.0);
    CHECK(rec.scale_max == 10.0);
    CHECK_FALSE(rec.constant_series);

    esn::TransformRecord rec2;
    const auto z = esn::scale_to_unit({2.0, 4.0, 6.0}, rec2);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == doctest::Approx(-0.5));
    CHECK(z[1] == doctest::Approx(0.0));
    CHECK(z[2] == doctest::Approx(0.5));

    esn::TransformRecord rec3;
    CHECK(esn::scale_to_unit({5.0, 5.0, 5.0}, rec3) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(rec3.constant_series);
}

TEST_CASE("inverse_transform hand cases") {
    esn::TransformRecord rec;
    rec.diff_order = 0;
    rec.scale_min = 0.0;
    rec.scale_max = 10.0;
    const auto y = esn::inverse_transform({0.5}, rec, {});
    REQUIRE(y.size() == 1);
    CHECK(y[0] == doctest::Approx(10.0).epsilon(1e-14));

    esn::TransformRecord rec1;
    rec1.diff_order = 1;
    rec1.scale_min = 0.0;
    rec1.scale_max = 10.0;
    // Scaled values that unscale to increments [2, 3].
    const auto path = esn::inverse_transform({-0.3, -0.2}, rec1, {100.0});
    REQUIRE(path.size() == 2);
    CHECK(path[0] == doctest::Approx(102.0).epsilon(1e-12));
    CHECK(path[1] == doctest::Approx(105.0).epsilon(1e-12));

    CHECK_THROWS_AS(esn::inverse_transform({0.0}, rec1, {}), esn::DataError);
}

TEST_CASE("forward then inverse reproduces the series at every order") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        // Mix of stationary, trending and quadratic fixtures with noise.
        for (int kind = 0; kind < 3; ++kind) {
            esn::Rng rng(1000 * seed + static_cast<std::uint64_t>(kind));
            const std::size_t t = 60 + 5 * seed;
            std::vector<double> y(t);
            for (std::size_t i = 0; i < t; ++i) {
                const auto x = static_cast<double>(i + 1);
                double value = rng.uniform(-1.0, 1.0);
                if (kind == 1) value += 3.0 * x;
                if (kind == 2) value += 0.05 * x * x;
                y[i] = value;
            }

            const auto [z, rec] = esn::forward_transform(y);
            const auto d = static_cast<std::size_t>(rec.diff_order);
            const auto back = esn::inverse_transform(z, rec, rec.initial_values);
            REQUIRE(back.size() == y.size() - d);
            for (std::size_t i = 0; i < back.size(); ++i) {
                const double expected = y[i + d];
                const double scale = std::max(1.0, std::abs(expected));
                CHECK(std::abs(back[i] - expected) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("scaled training data stays inside the target interval") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const auto y = noise_fixture(90, seed);
        const auto [z, rec] = esn::forward_transform(y);
        for (const double v : z) {
            CHECK(v >= esn::TransformRecord::target_lo);
            CHECK(v <= esn::TransformRecord::target_hi);
        }
    }
}
