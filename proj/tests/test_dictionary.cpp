#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "greedy/dictionary.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

namespace {

// closed-form eigenvalue extremes of a 3x3 symmetric matrix (trigonometric
// formula) -- independent of the jacobi solver under test
std::pair<double, double> eig3_extremes(const Mat& a) {
    double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    if (p1 == 0.0) {
        double lo = std::min({a(0, 0), a(1, 1), a(2, 2)});
        double hi = std::max({a(0, 0), a(1, 1), a(2, 2)});
        return {lo, hi};
    }
    double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
    double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
    double p = std::sqrt(p2 / 6.0);
    Mat b(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) = (a(i, j) - (i == j ? q : 0.0)) / p;
    double detb = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                  b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                  b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    double r = std::clamp(detb / 2.0, -1.0, 1.0);
    double phi = std::acos(r) / 3.0;
    double hi = q + 2.0 * p * std::cos(phi);
    double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    return {lo, hi};
}

} // namespace

TEST_CASE("canonical dictionary") {
    SpaceLp s(3, 2.0);
    Dictionary d = make_canonical(s);
    CHECK(d.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(norm(s, d.element(i)) == doctest::Approx(1.0));
        CHECK(d.element(i)[i] == 1.0);
    }
    Dictionary d1 = make_canonical(SpaceLp(1, 3.0));
    CHECK(d1.size() == 1);
    CHECK(d1.element(0)[0] == 1.0);
}

TEST_CASE("random unit dictionary determinism and normalization") {
    SpaceLp s(16, 3.0);
    Dictionary a = make_random_unit(s, 8, 42);
    Dictionary b = make_random_unit(s, 8, 42);
    Dictionary c = make_random_unit(s, 8, 43);
    bool same = true, differs = false;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            same = same && a.element(i)[j] == b.element(i)[j];
            differs = differs || a.element(i)[j] != c.element(i)[j];
        }
    CHECK(same);
    CHECK(differs);
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(norm(s, a.element(i)) == doctest::Approx(1.0).epsilon(1e-12));

    SpaceLp h(64, 2.0);
    CHECK(coherence(make_random_unit(h, 32, 7)) < 1.0);
    CHECK(coherence(make_random_unit(h, 1, 7)) == 0.0);
}

TEST_CASE("trigonometric grid dictionary") {
    SpaceLp h(16, 2.0);
    Dictionary d = make_trig_grid(h, 4);
    CHECK(d.size() == 9);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            CHECK(std::abs(dot(d.element(i), d.element(j))) < 1e-9);

    SpaceLp s4(16, 4.0);
    Dictionary d4 = make_trig_grid(s4, 4);
    for (std::size_t i = 0; i < d4.size(); ++i)
        CHECK(norm(s4, d4.element(i)) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS(make_trig_grid(h, 8)); // 2K >= n
}

TEST_CASE("haar grid dictionary") {
    SpaceLp h(8, 2.0);
    Dictionary d = make_haar_grid(h, 3);
    CHECK(d.size() == 8);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(norm(h, d.element(i)) == doctest::Approx(1.0));
        for (std::size_t j = i + 1; j < d.size(); ++j)
            CHECK(std::abs(dot(d.element(i), d.element(j))) < 1e-12);
    }
    CHECK_THROWS(make_haar_grid(SpaceLp(10, 2.0), 3));
}

TEST_CASE("d_norm basics and loop oracle") {
    SpaceLp s(3, 2.0);
    Dictionary d = make_canonical(s);
    DualFunctional f{{0.2, -0.7, 0.1}};
    auto r = d_norm(f, d);
    CHECK(r.value == doctest::Approx(0.7));
    CHECK(r.index == 1);
    CHECK(r.sign == -1);
    auto z = d_norm(DualFunctional{{0.0, 0.0, 0.0}}, d);
    CHECK(z.value == 0.0);

    SpaceLp s3(10, 3.0);
    Dictionary rd = make_random_unit(s3, 12, 5);
    RngStream rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        Element x(10);
        for (double& v : x) v = rng.normal();
        DualFunctional ff = norming_functional(s3, x);
        auto got = d_norm(ff, rd);
        double best = 0.0;
        for (std::size_t i = 0; i < rd.size(); ++i)
            best = std::max(best, std::abs(dot(ff.coords, rd.element(i))));
        CHECK(got.value == doctest::Approx(best).epsilon(1e-14));
    }
}

TEST_CASE("d_norm is invariant under element negation") {
    SpaceLp s(6, 2.5);
    Dictionary d = make_random_unit(s, 5, 11);
    std::vector<Element> flipped = d.elements();
    for (double& x : flipped[2]) x = -x;
    Dictionary d2(s, flipped, "flipped");
    RngStream rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        Element x(6);
        for (double& v : x) v = rng.normal();
        DualFunctional f = norming_functional(s, x);
        CHECK(d_norm(f, d).value == doctest::Approx(d_norm(f, d2).value).epsilon(1e-14));
    }
}

TEST_CASE("weak selection rules") {
    SpaceLp s(3, 2.0);
    Dictionary d = make_canonical(s);
    DualFunctional f{{0.2, -0.7, 0.1}};
    auto s1 = select_weak(f, d, 1.0);
    REQUIRE(s1);
    CHECK(s1->index == 1);
    CHECK(s1->sign == -1);
    auto s2 = select_weak(f, d, 0.5);
    REQUIRE(s2);
    CHECK(s2->index == 1); // lowest index with |F| >= 0.35 (only 0.7 qualifies)
    CHECK(s2->sign == -1);
    auto s2b = select_weak(DualFunctional{{0.4, -0.7, 0.1}}, d, 0.5);
    REQUIRE(s2b);
    CHECK(s2b->index == 0); // now 0.4 >= 0.35 and has the lower index
    CHECK(s2b->sign == 1);
    CHECK(!select_weak(DualFunctional{{0.0, 0.0, 0.0}}, d, 0.5));
    auto s3 = select_weak(f, d, 0.5, TieRule::ExactMax);
    REQUIRE(s3);
    CHECK(s3->index == 1);

    // t = 1 achieves the d-norm exactly
    SpaceLp sp(8, 3.0);
    Dictionary rd = make_random_unit(sp, 10, 3);
    RngStream rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        Element x(8);
        for (double& v : x) v = rng.normal();
        DualFunctional ff = norming_functional(sp, x);
        auto sel = select_weak(ff, rd, 1.0);
        REQUIRE(sel);
        CHECK(std::abs(dot(ff.coords, rd.element(sel->index))) ==
              doctest::Approx(d_norm(ff, rd).value));
    }
}

TEST_CASE("coherence closed forms and oracle") {
    SpaceLp s(4, 3.0);
    CHECK(coherence(make_canonical(s)) == doctest::Approx(0.0));

    // two unit vectors at 60 degrees in l_2
    SpaceLp h(2, 2.0);
    std::vector<Element> els = {{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    Dictionary pair(h, els, "pair60");
    CHECK(coherence(pair) == doctest::Approx(0.5));

    // independent pairwise loop at p = 2 (functionals are the atoms)
    SpaceLp h8(8, 2.0);
    Dictionary rd = make_random_unit(h8, 9, 21);
    double oracle = 0.0;
    for (std::size_t i = 0; i < rd.size(); ++i)
        for (std::size_t j = 0; j < rd.size(); ++j)
            if (i != j) oracle = std::max(oracle, std::abs(dot(rd.element(i), rd.element(j))));
    CHECK(coherence(rd) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("equiangular dictionary has exact coherence mu") {
    Dictionary d = make_equiangular(8, 0.2);
    CHECK(d.size() == 8);
    CHECK(coherence(d) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("rip delta closed forms") {
    SpaceLp h(6, 2.0);
    CHECK(rip_delta(make_canonical(h), 3) == doctest::Approx(0.0));

    SpaceLp h2(2, 2.0);
    double c = 0.37;
    std::vector<Element> els = {{1.0, 0.0}, {c, std::sqrt(1.0 - c * c)}};
    Dictionary pair(h2, els, "pair");
    CHECK(rip_delta(pair, 2) == doctest::Approx(c).epsilon(1e-10)); // eigenvalues 1 +- c

    CHECK_THROWS(rip_delta(make_canonical(SpaceLp(4, 3.0)), 2)); // p != 2
}

TEST_CASE("rip delta matches closed-form 3x3 eigen oracle") {
    SpaceLp h(8, 2.0);
    Dictionary d = make_random_unit(h, 12, 77);
    double delta = rip_delta(d, 3);
    double oracle = 0.0;
    for_each_subset(12, 3, [&](const std::vector<std::size_t>& s) {
        Mat g(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) g(i, j) = dot(d.element(s[i]), d.element(s[j]));
        auto [lo, hi] = eig3_extremes(g);
        oracle = std::max({oracle, hi - 1.0, 1.0 - lo});
    });
    CHECK(delta == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("structural constants on orthonormal dictionaries") {
    SpaceLp h(6, 2.0);
    Dictionary d = make_canonical(h);
    CHECK(unconditionality_constant(d, 2, 4) == doctest::Approx(1.0));
    CHECK(nikolskii_constant(d, 2, 0.5) == doctest::Approx(1.0));
    CHECK(l1_incoherence_constant(d, 2, 4, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("unconditionality of the coherent pair is sqrt(3)") {
    SpaceLp h(2, 2.0);
    std::vector<Element> els = {{1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
    Dictionary pair(h, els, "pair");
    CHECK(unconditionality_constant(pair, 2, 2) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
}

TEST_CASE("structural constant inequalities on random instances") {
    for (double p : {2.0, 3.0}) {
        SpaceLp s(6, p);
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            Dictionary d = make_random_unit(s, 7, seed);
            StructuralConstants sc = structural_constants(d, 2, 4, 0.5);
            CHECK(sc.v <= sc.c1 * sc.u + 1e-9);
            CHECK(sc.u >= 1.0);
            CHECK(sc.c1 >= 1.0 - 1e-9);
            if (p == 2.0) {
                // Riesz-ratio consequence of the measured RIP delta; only
                // meaningful for Riesz dictionaries (delta < 1)
                if (sc.rip_delta < 1.0) {
                    double bound = std::sqrt((1.0 + sc.rip_delta) / (1.0 - sc.rip_delta));
                    CHECK(sc.u <= bound + 1e-6);
                }
                CHECK(sc.exact);
            } else {
                CHECK(!sc.exact);
            }
        }
    }
}

TEST_CASE("riesz dictionary: U bounded through the measured rip delta") {
    Dictionary d = make_equiangular(5, 0.1);
    double delta = rip_delta(d, 3);
    // subset grams are (1-mu) I + mu J: eigenvalues 1-mu and 1+(s-1)mu
    CHECK(delta == doctest::Approx(0.2).epsilon(1e-10));
    double u = unconditionality_constant(d, 3, 3);
    CHECK(u <= std::sqrt((1.0 + delta) / (1.0 - delta)) + 1e-6);
}

TEST_CASE("sample_A1 invariants") {
    SpaceLp s(12, 2.5);
    Dictionary d = make_random_unit(s, 10, 5);
    RngStream rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        auto a1 = sample_A1(d, 1 + rep % 10, rng);
        CHECK(a1.l1_mass() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(norm(s, a1.combined) <= 1.0 + 1e-9);
        for (const auto& t : a1.terms) CHECK(t.coefficient >= 0.0);
    }
    auto single = sample_A1(d, 1, rng);
    CHECK(single.terms.size() == 1);
    CHECK(single.terms[0].coefficient == doctest::Approx(1.0));
    CHECK_THROWS(sample_A1(d, 11, rng));
}

TEST_CASE("sup over A_1 stays below the d-norm (empirical duality)") {
    SpaceLp s(8, 3.0);
    Dictionary d = make_random_unit(s, 9, 13);
    RngStream rng(17);
    for (int rep = 0; rep < 30; ++rep) {
        Element x(8);
        for (double& v : x) v = rng.normal();
        DualFunctional f = norming_functional(s, x);
        double dn = d_norm(f, d).value;
        for (int inner = 0; inner < 30; ++inner) {
            auto a1 = sample_A1(d, 1 + inner % 9, rng);
            CHECK(std::abs(f(a1.combined)) <= dn + 1e-9);
        }
    }
}

TEST_CASE("subset enumeration guard") {
    CHECK_THROWS(for_each_subset(64, 20, [](const std::vector<std::size_t>&) {}));
    std::size_t count = 0;
    for_each_subset(5, 2, [&](const std::vector<std::size_t>&) { ++count; });
    CHECK(count == 10);
}
