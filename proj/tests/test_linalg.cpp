#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "esn/errors.hpp"
#include "esn/linalg.hpp"
#include "esn/rng.hpp"

#ifdef ESN_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#endif

using esn::Matrix;

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    esn::Rng rng(seed);
    Matrix m(n, n);
    for (auto& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("rng streams are deterministic and uniform values stay in range") {
    esn::Rng a(1234), b(1234);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    esn::Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 1000; ++i) {
        CHECK(rng.bounded(7) < 7);
    }
}

TEST_CASE("task seeds separate series and configurations") {
    const auto s1 = esn::task_seed(42, "M1", 0);
    CHECK(s1 == esn::task_seed(42, "M1", 0));
    CHECK(s1 != esn::task_seed(42, "M1", 1));
    CHECK(s1 != esn::task_seed(42, "M2", 0));
    CHECK(s1 != esn::task_seed(43, "M1", 0));
}

TEST_CASE("spectral radius of hand-checkable matrices") {
    Matrix rotation(2, 2);
    rotation(0, 1) = 1.0;
    rotation(1, 0) = -1.0;
    CHECK(esn::spectral_radius(rotation) == doctest::Approx(1.0).epsilon(1e-10));

    Matrix diag(2, 2);
    diag(0, 0) = -3.0;
    diag(1, 1) = 2.0;
    CHECK(esn::spectral_radius(diag) == doctest::Approx(3.0).epsilon(1e-10));

    CHECK(esn::spectral_radius(Matrix(3, 3)) == 0.0);

    Matrix one(1, 1);
    one(0, 0) = -2.5;
    CHECK(esn::spectral_radius(one) == doctest::Approx(2.5).epsilon(1e-12));

    Matrix jordan(2, 2);  // defective: double eigenvalue 1
    jordan(0, 0) = 1.0;
    jordan(0, 1) = 1.0;
    jordan(1, 1) = 1.0;
    CHECK(esn::spectral_radius(jordan) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(esn::spectral_radius(Matrix(2, 3)), esn::NumericError);
}

#ifdef ESN_HAVE_EIGEN
TEST_CASE("eigenvalues match Eigen on random matrices") {
    for (const std::size_t n : {2UL, 3UL, 5UL, 10UL, 25UL, 60UL, 120UL, 200UL}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const Matrix m = random_matrix(n, 1000 * n + seed);

            Eigen::MatrixXd em(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) em(i, j) = m(i, j);
            const Eigen::VectorXcd reference = em.eigenvalues();

            auto ours = esn::eigenvalues(m);
            REQUIRE(ours.size() == n);

            std::vector<double> ours_mod, ref_mod;
            for (const auto& ev : ours) ours_mod.push_back(std::abs(ev));
            for (Eigen::Index i = 0; i < reference.size(); ++i)
                ref_mod.push_back(std::abs(reference(i)));
            std::sort(ours_mod.begin(), ours_mod.end());
            std::sort(ref_mod.begin(), ref_mod.end());

            const double scale = std::max(1.0, ref_mod.back());
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(std::abs(ours_mod[i] - ref_mod[i]) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("sparse masked matrices keep eigenvalue accuracy") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        esn::Rng rng(seed);
        const std::size_t n = 50 + 10 * seed;
        Matrix m(n, n);
        for (auto& v : m.data()) {
            const double value = rng.uniform(-0.5, 0.5);
            v = rng.uniform01() < 0.5 ? value : 0.0;
        }
        Eigen::MatrixXd em(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) em(i, j) = m(i, j);
        const double reference =
            em.eigenvalues().cwiseAbs().maxCoeff();
        CHECK(esn::spectral_radius(m) == doctest::Approx(reference).epsilon(1e-9));
    }
}
#endif

TEST_CASE("cholesky solves SPD systems") {
    Matrix a(3, 3);
    const double raw[3][3] = {{4, 2, 0.6}, {2, 5, 1.2}, {0.6, 1.2, 6}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a(i, j) = raw[i][j];
    const std::vector<double> b = {1.0, -2.0, 3.0};

    const esn::Cholesky chol(a);
    const auto x = chol.solve(b);

    for (std::size_t i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < 3; ++j) acc += a(i, j) * x[j];
        CHECK(acc == doctest::Approx(b[i]).epsilon(1e-12));
    }

    const Matrix inv = chol.inverse();
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 3; ++k) acc += a(i, k) * inv(k, j);
            CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("cholesky rejects indefinite and singular matrices") {
    Matrix indefinite(2, 2);
    indefinite(0, 0) = 1.0;
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(esn::Cholesky{indefinite}, esn::NumericError);

    Matrix singular(2, 2);
    singular(0, 0) = 2.0;  // second pivot is exactly zero
    CHECK_THROWS_AS(esn::Cholesky{singular}, esn::NumericError);
}

TEST_CASE("gram and matrix-vector products agree with direct evaluation") {
    esn::Rng rng(99);
    Matrix x(7, 4);
    for (auto& v : x.data()) v = rng.uniform(-2.0, 2.0);
    std::vector<double> y(7);
    for (auto& v : y) v = rng.uniform(-1.0, 1.0);

    const Matrix g = esn::gram(x);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 7; ++k) acc += x(k, i) * x(k, j);
            CHECK(g(i, j) == doctest::Approx(acc).epsilon(1e-14));
        }
    }

    const auto xty = esn::transpose_times(x, y);
    for (std::size_t i = 0; i < 4; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 7; ++k) acc += x(k, i) * y[k];
        CHECK(xty[i] == doctest::Approx(acc).epsilon(1e-14));
    }
}
