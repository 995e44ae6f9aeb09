#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greedy/bilinear.hpp"
#include "greedy/oracle.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

Mat random_mat(std::size_t r, std::size_t c, RngStream& rng) {
    Mat m(r, c);
    for (double& x : m.data) x = rng.normal();
    return m;
}

} // namespace

TEST_CASE("rank-one greedy on a diagonal matrix picks singular values in order") {
    Mat d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 2.0;
    d(2, 2) = 1.0;
    auto res = pga_rank_one(d, 2);
    REQUIRE(res.terms.size() == 2);
    CHECK(res.terms[0].c == doctest::Approx(3.0));
    CHECK(res.terms[1].c == doctest::Approx(2.0));
    CHECK(res.residual_norms[2] == doctest::Approx(1.0));
    auto full = pga_rank_one(d, 3);
    CHECK(full.residual_norms.back() <= 1e-9);
}

TEST_CASE("rank-one greedy matches the svd tail at every step") {
    RngStream rng(7);
    Mat a = random_mat(8, 6, rng);
    auto res = pga_rank_one(a, 6);
    for (std::size_t m = 1; m < res.residual_norms.size(); ++m) {
        double tail = svd_tail(a, m);
        CHECK(res.residual_norms[m] ==
              doctest::Approx(tail).epsilon(1e-8));
    }
}

TEST_CASE("pythagoras along the greedy deflation") {
    RngStream rng(9);
    Mat a = random_mat(7, 5, rng);
    double total = frobenius_norm(a);
    auto res = pga_rank_one(a, 5);
    double acc = 0.0;
    for (std::size_t m = 0; m < res.terms.size(); ++m) {
        acc += res.terms[m].c * res.terms[m].c;
        double rhs = acc + res.residual_norms[m + 1] * res.residual_norms[m + 1];
        CHECK(rhs == doctest::Approx(total * total).epsilon(1e-9));
    }
}

TEST_CASE("greedy step is optimal against random rank-one probes") {
    RngStream rng(13);
    Mat a = random_mat(6, 5, rng);
    auto res = pga_rank_one(a, 1);
    REQUIRE(res.terms.size() == 1);
    double best = res.residual_norms[1];
    for (int rep = 0; rep < 200; ++rep) {
        Vec u(6), v(5);
        for (double& x : u) x = rng.normal();
        for (double& x : v) x = rng.normal();
        double nu = norm2(u), nv = norm2(v);
        for (double& x : u) x /= nu;
        for (double& x : v) x /= nv;
        // best coefficient for this probe is u^T a v
        double c = 0.0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 5; ++j) c += u[i] * a(i, j) * v[j];
        Mat r = a;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 5; ++j) r(i, j) -= c * u[i] * v[j];
        CHECK(best <= frobenius_norm(r) + 1e-9);
    }
}

TEST_CASE("schmidt expansion reconstructs and is orthonormal") {
    RngStream rng(17);
    Mat a = random_mat(6, 4, rng);
    auto terms = schmidt_expansion(a);
    REQUIRE(terms.size() == 4);
    // reconstruction
    Mat r = a;
    for (const auto& t : terms)
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 4; ++j) r(i, j) -= t.c * t.u[i] * t.v[j];
    CHECK(frobenius_norm(r) <= 1e-9);
    // factor orthonormality and ordering
    for (std::size_t i = 0; i < terms.size(); ++i) {
        CHECK(norm2(terms[i].u) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(norm2(terms[i].v) == doctest::Approx(1.0).epsilon(1e-8));
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            CHECK(std::abs(dot(terms[i].u, terms[j].u)) < 1e-8);
            CHECK(std::abs(dot(terms[i].v, terms[j].v)) < 1e-8);
            CHECK(terms[i].c >= terms[j].c - 1e-12);
        }
    }
    // rank-one input gives a single term
    Mat r1(5, 3);
    Vec u(5), v(3);
    for (double& x : u) x = rng.normal();
    for (double& x : v) x = rng.normal();
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) r1(i, j) = u[i] * v[j];
    auto one = schmidt_expansion(r1);
    REQUIRE(one.size() >= 1);
    CHECK(one[0].c == doctest::Approx(norm2(u) * norm2(v)).epsilon(1e-9));
    for (std::size_t k = 1; k < one.size(); ++k) CHECK(one[k].c <= 1e-9);
}

TEST_CASE("greedy terms match schmidt terms up to sign for distinct spectra") {
    RngStream rng(21);
    // construct distinct singular values explicitly
    Mat u0 = orthonormal_columns(random_mat(6, 4, rng));
    Mat v0 = orthonormal_columns(random_mat(4, 4, rng));
    Vec s = {4.0, 2.5, 1.2, 0.4};
    Mat a(6, 4);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 4; ++k) acc += u0(i, k) * s[k] * v0(j, k);
            a(i, j) = acc;
        }
    auto greedy = pga_rank_one(a, 4);
    auto schmidt = schmidt_expansion(a);
    REQUIRE(greedy.terms.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(greedy.terms[k].c == doctest::Approx(schmidt[k].c).epsilon(1e-8));
        double align = dot(greedy.terms[k].u, schmidt[k].u);
        double sign = align >= 0.0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(greedy.terms[k].u[i] ==
                  doctest::Approx(sign * schmidt[k].u[i]).epsilon(1e-6));
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(greedy.terms[k].v[j] ==
                  doctest::Approx(sign * schmidt[k].v[j]).epsilon(1e-6));
    }
}

TEST_CASE("zero matrix yields no terms") {
    Mat z(4, 3);
    auto res = pga_rank_one(z, 2);
    CHECK(res.terms.empty());
    CHECK(res.residual_norms[0] == 0.0);
}
