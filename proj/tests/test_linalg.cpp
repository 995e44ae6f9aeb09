#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greedy/linalg.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

Mat random_mat(std::size_t r, std::size_t c, RngStream& rng) {
    Mat m(r, c);
    for (double& x : m.data) x = rng.normal();
    return m;
}

} // namespace

TEST_CASE("least squares matches normal equations on random systems") {
    RngStream rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 6 + rep % 5, k = 2 + rep % 4;
        Mat a = random_mat(n, k, rng);
        Vec b(n);
        for (double& x : b) x = rng.normal();
        auto ls = solve_least_squares(a, b);
        REQUIRE(!ls.dropped_any);
        // residual must be orthogonal to the columns
        Vec r = b;
        Vec ax = matvec(a, ls.coeffs);
        for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i];
        Vec g = matvec_t(a, r);
        for (double gi : g) CHECK(std::abs(gi) < 1e-10);
    }
}

TEST_CASE("least squares drops dependent columns") {
    Mat a(3, 3);
    a(0, 0) = 1;
    a(1, 1) = 1;
    // third column = first + second
    a(0, 2) = 1;
    a(1, 2) = 1;
    Vec b = {2.0, 3.0, 0.0};
    auto ls = solve_least_squares(a, b);
    CHECK(ls.dropped_any);
    CHECK(ls.kept[0]);
    CHECK(ls.kept[1]);
    CHECK(!ls.kept[2]);
    CHECK(ls.coeffs[0] == doctest::Approx(2.0));
    CHECK(ls.coeffs[1] == doctest::Approx(3.0));
    CHECK(ls.coeffs[2] == 0.0);
}

TEST_CASE("jacobi eigendecomposition reconstructs symmetric matrices") {
    RngStream rng(22);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 2 + rep % 6;
        Mat b = random_mat(n, n, rng);
        Mat s = gram(b);
        auto eig = jacobi_eigh(s, true);
        // S v_j = lambda_j v_j
        for (std::size_t j = 0; j < n; ++j) {
            Vec v = eig.vectors.col(j);
            Vec sv = matvec(s, v);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(std::abs(sv[i] - eig.values[j] * v[i]) < 1e-9 * (1.0 + std::abs(eig.values[j])));
        }
        for (std::size_t j = 0; j + 1 < n; ++j) CHECK(eig.values[j] <= eig.values[j + 1] + 1e-12);
    }
}

TEST_CASE("jacobi eig on 2x2 gram with inner product c gives 1 +- c") {
    Mat s(2, 2);
    s(0, 0) = s(1, 1) = 1.0;
    s(0, 1) = s(1, 0) = 0.3;
    auto eig = jacobi_eigh(s);
    CHECK(eig.values[0] == doctest::Approx(0.7));
    CHECK(eig.values[1] == doctest::Approx(1.3));
}

TEST_CASE("svd satisfies the Frobenius identity and reconstruction") {
    RngStream rng(33);
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{6, 5}, {5, 6}, {8, 3}, {4, 4}}) {
        Mat a = random_mat(r, c, rng);
        auto svd = jacobi_svd(a);
        double frob2 = 0.0;
        for (double x : a.data) frob2 += x * x;
        double ssum = 0.0;
        for (double s : svd.s) ssum += s * s;
        CHECK(std::abs(frob2 - ssum) < 1e-9 * (1.0 + frob2));
        // reconstruction
        std::size_t k = svd.s.size();
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) {
                double v = 0.0;
                for (std::size_t t = 0; t < k; ++t) v += svd.u(i, t) * svd.s[t] * svd.v(j, t);
                CHECK(std::abs(v - a(i, j)) < 1e-9);
            }
        for (std::size_t t = 0; t + 1 < k; ++t) CHECK(svd.s[t] >= svd.s[t + 1] - 1e-12);
    }
}

TEST_CASE("lu solve recovers known solutions and flags singular systems") {
    RngStream rng(44);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 2 + rep % 5;
        Mat a = random_mat(n, n, rng);
        Vec x(n);
        for (double& v : x) v = rng.normal();
        Vec b = matvec(a, x);
        auto sol = lu_solve(a, b);
        REQUIRE(sol.has_value());
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs((*sol)[i] - x[i]) < 1e-8);
    }
    Mat sing(2, 2);
    sing(0, 0) = 1;
    sing(0, 1) = 2;
    sing(1, 0) = 2;
    sing(1, 1) = 4;
    CHECK(!lu_solve(sing, {1.0, 1.0}).has_value());
}

TEST_CASE("linf fit matches dense grid search on small problems") {
    RngStream rng(55);
    for (int rep = 0; rep < 12; ++rep) {
        std::size_t n = 5 + rep % 4;
        Mat m = random_mat(n, 1, rng);
        Vec b(n);
        for (double& v : b) v = rng.normal();
        auto fit = linf_fit(m, b);
        // grid oracle over one coefficient
        double best = 1e300;
        for (double c = -5.0; c <= 5.0; c += 1e-4) {
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v = std::max(v, std::abs(b[i] - m(i, 0) * c));
            best = std::min(best, v);
        }
        CHECK(fit.value <= best + 1e-6);
        double achieved = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            achieved = std::max(achieved, std::abs(b[i] - m(i, 0) * fit.coeffs[0]));
        CHECK(achieved == doctest::Approx(fit.value).epsilon(1e-8));
    }
}

TEST_CASE("linf fit two-coefficient case against coarse grid") {
    RngStream rng(66);
    for (int rep = 0; rep < 6; ++rep) {
        std::size_t n = 7;
        Mat m = random_mat(n, 2, rng);
        Vec b(n);
        for (double& v : b) v = rng.normal();
        auto fit = linf_fit(m, b);
        double best = 1e300;
        for (double c0 = -4.0; c0 <= 4.0; c0 += 0.01)
            for (double c1 = -4.0; c1 <= 4.0; c1 += 0.01) {
                double v = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    v = std::max(v, std::abs(b[i] - m(i, 0) * c0 - m(i, 1) * c1));
                if (v < best) best = v;
            }
        CHECK(fit.value <= best + 1e-9);
        CHECK(fit.value >= best - 0.05); // grid resolution slack
    }
}

TEST_CASE("rng streams are deterministic and independent") {
    RngStream a = RngStream::derive(123, "exp:a/rep:0");
    RngStream b = RngStream::derive(123, "exp:a/rep:0");
    RngStream c = RngStream::derive(123, "exp:a/rep:1");
    bool differs = false;
    for (int i = 0; i < 32; ++i) {
        auto xa = a.next_u64();
        CHECK(xa == b.next_u64());
        if (xa != c.next_u64()) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("rng normal has sane moments") {
    RngStream rng(7);
    double s = 0.0, s2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
}
