#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lieexp/eigensolver.hpp"
#include "lieexp/error.hpp"

using namespace lieexp;
using namespace lieexp::eigen;

namespace {

std::vector<double> random_symmetric(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = U(rng);
    return a;
}

// reference eigenvalues, descending
std::vector<double> oracle(const std::vector<double>& a, std::size_t n) {
    Eigen::MatrixXd M(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) = a[i * n + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
    std::sort(v.rbegin(), v.rend());
    return v;
}

std::vector<double> cycle_matrix(std::size_t n) {
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        a[i * n + (i + 1) % n] += 0.5;
        a[i * n + (i + n - 1) % n] += 0.5;
    }
    return a;
}

}  // namespace

TEST(DenseEigen, MatchesReferenceOnRandomMatrices) {
    for (std::size_t n : {1u, 2u, 3u, 10u, 57u, 200u}) {
        auto a = random_symmetric(n, n);
        auto ours = symmetric_eigenvalues(a, n);
        auto ref = oracle(a, n);
        ASSERT_EQ(ours.size(), n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ours[i], ref[i], 1e-10) << "n=" << n << " i=" << i;
    }
}

TEST(DenseEigen, CirculantSpectrum) {
    for (std::size_t n : {5u, 6u, 31u}) {
        auto ours = symmetric_eigenvalues(cycle_matrix(n), n);
        std::vector<double> expect;
        for (std::size_t j = 0; j < n; ++j) expect.push_back(std::cos(2 * std::numbers::pi * j / n));
        std::sort(expect.rbegin(), expect.rend());
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ours[i], expect[i], 1e-12);
    }
}

TEST(DenseEigen, RepeatedEigenvalues) {
    // K4 normalized: {1, -1/3, -1/3, -1/3}
    std::vector<double> a(16, 1.0 / 3.0);
    for (int i = 0; i < 4; ++i) a[i * 5] = 0;
    auto ev = symmetric_eigenvalues(a, 4);
    EXPECT_NEAR(ev[0], 1.0, 1e-14);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], -1.0 / 3.0, 1e-14);
    std::vector<double> id(9, 0.0);
    id[0] = id[4] = id[8] = 1.0;
    for (double x : symmetric_eigenvalues(id, 3)) EXPECT_DOUBLE_EQ(x, 1.0);
    EXPECT_THROW(symmetric_eigenvalues({1, 2, 3}, 2), InvalidArgument);
}

TEST(Jacobi, EigenpairsAndOrthonormality) {
    const std::size_t n = 12;
    auto a = random_symmetric(n, 77);
    std::vector<double> V;
    auto vals = jacobi_eigen(a, n, V);
    auto ref = oracle(a, n);
    std::sort(ref.begin(), ref.end());
    for (std::size_t c = 0; c < n; ++c) {
        EXPECT_NEAR(vals[c], ref[c], 1e-11);
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0;
            for (std::size_t j = 0; j < n; ++j) av += a[i * n + j] * V[j * n + c];
            EXPECT_NEAR(av, vals[c] * V[i * n + c], 1e-11);
        }
        for (std::size_t c2 = 0; c2 < n; ++c2) {
            double d = 0;
            for (std::size_t i = 0; i < n; ++i) d += V[i * n + c] * V[i * n + c2];
            EXPECT_NEAR(d, c == c2 ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(Lanczos, DiagonalOperatorExtremes) {
    const std::size_t n = 3000;
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = std::cos(std::numbers::pi * (i + 0.5) / n);
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = diag[i] * x[i];
    };
    auto r = lanczos_extremes(op, n, {});
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.largest, diag.front(), 1e-10);
    EXPECT_NEAR(r.smallest, diag.back(), 1e-10);
    EXPECT_LE(r.residual_largest, 1e-7);
}

TEST(Lanczos, DeflationRemovesEigenvectors) {
    const std::size_t n = 500;
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (x[(i + 1) % n] + x[(i + n - 1) % n]);
    };
    // constant (λ = 1) and alternating (λ = −1) removed: extremes become ±cos(2π/n)
    std::vector<double> c(n, 1.0), s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i % 2 ? -1.0 : 1.0;
    auto r = lanczos_extremes(op, n, {c, s}, {.tol = 1e-9});
    const double expect = std::cos(2 * std::numbers::pi / n);
    EXPECT_NEAR(r.largest, expect, 1e-9);
    EXPECT_NEAR(r.smallest, -expect, 1e-9);
    EXPECT_LT(r.largest, 1 - 1e-12);
}

TEST(Lanczos, ExactOnSmallInvariantSubspace) {
    // 6-cycle minus constant and sign: spectrum {±1/2} with multiplicity 2
    const std::size_t n = 6;
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * (x[(i + 1) % n] + x[(i + n - 1) % n]);
    };
    std::vector<double> c(n, 1.0), s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i % 2 ? -1.0 : 1.0;
    auto r = lanczos_extremes(op, n, {c, s});
    EXPECT_NEAR(r.largest, 0.5, 1e-12);
    EXPECT_NEAR(r.smallest, -0.5, 1e-12);
    EXPECT_THROW(lanczos_extremes(op, 2, {{1, 0}, {0, 1}}), InvalidArgument);
}

TEST(Lanczos, AgreesWithDenseOnRandomMatrix) {
    const std::size_t n = 300;
    auto a = random_symmetric(n, 5);
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
            y[i] = s;
        }
    };
    auto ref = oracle(a, n);
    auto r = lanczos_extremes(op, n, {}, {.tol = 1e-9});
    EXPECT_NEAR(r.largest, ref.front(), 1e-9);
    EXPECT_NEAR(r.smallest, ref.back(), 1e-9);
}

TEST(Lanczos, ReportsNonConvergence) {
    const std::size_t n = 2000;
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(0.37 * i) * x[i];
    };
    try {
        lanczos_extremes(op, n, {}, {.tol = 1e-14, .basis = 10, .keep_per_end = 2, .max_restarts = 1});
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_GT(e.residual(), 1e-14);
    }
}

TEST(Lanczos, DeterministicForSeed) {
    const std::size_t n = 800;
    auto op = [&](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = std::cos(0.01 * i) * x[i];
    };
    auto a = lanczos_extremes(op, n, {}), b = lanczos_extremes(op, n, {});
    EXPECT_EQ(a.largest, b.largest);
    EXPECT_EQ(a.smallest, b.smallest);
    EXPECT_EQ(a.matvecs, b.matvecs);
}
