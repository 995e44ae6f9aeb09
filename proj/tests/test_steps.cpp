#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greedy/rng.hpp"
#include "greedy/steps.hpp"

using namespace greedy;

namespace {

double grid_min_lambda(const SpaceLp& s, const Element& f, const Element& g, double lo,
                       double hi, double step) {
    double best = 1e300, best_l = lo;
    for (double l = lo; l <= hi; l += step) {
        double v = norm(s, add_scaled(f, -l, g));
        if (v < best) {
            best = v;
            best_l = l;
        }
    }
    return best_l;
}

} // namespace

TEST_CASE("line search closed forms at p = 2") {
    SpaceLp h(2, 2.0);
    auto r = line_search_1d(h, {1.0, 0.0}, {1.0, 0.0});
    CHECK(r.lambda == doctest::Approx(1.0));
    CHECK(r.residual_norm == doctest::Approx(0.0));
    auto r2 = line_search_1d(h, {0.0, 1.0}, {1.0, 0.0}); // orthogonal
    CHECK(r2.lambda == doctest::Approx(0.0));
    CHECK_THROWS(line_search_1d(h, {1.0, 1.0}, {0.0, 0.0}));
}

TEST_CASE("line search at p = 3 matches a dense grid") {
    SpaceLp s(2, 3.0);
    Element f = {1.0, 2.0}, g = {0.0, 1.0};
    auto r = line_search_1d(s, f, g);
    double oracle = grid_min_lambda(s, f, g, 1.5, 2.5, 1e-6);
    CHECK(r.lambda == doctest::Approx(oracle).epsilon(1e-5));
    // residual no larger than any grid value
    CHECK(r.residual_norm <= norm(s, add_scaled(f, -oracle, g)) + 1e-9);
}

TEST_CASE("line search residual never exceeds ||f||") {
    RngStream rng(3);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        SpaceLp s(6, p);
        for (int rep = 0; rep < 50; ++rep) {
            Element f(6), g(6);
            for (double& v : f) v = rng.normal();
            for (double& v : g) v = rng.normal();
            auto r = line_search_1d(s, f, g);
            CHECK(r.residual_norm <= norm(s, f) + 1e-9);
        }
    }
}

TEST_CASE("interval line search clamps to the feasible endpoint") {
    SpaceLp h(2, 2.0);
    // unconstrained minimizer is 2, interval caps it at 1
    auto r = line_search_interval(h, {2.0, 0.0}, {1.0, 0.0}, 0.0, 1.0);
    CHECK(r.lambda == doctest::Approx(1.0));
    auto r2 = line_search_interval(h, {-2.0, 0.0}, {1.0, 0.0}, 0.0, 1.0);
    CHECK(r2.lambda == doctest::Approx(0.0));
    SpaceLp s(3, 3.0);
    RngStream rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        Element f(3), g(3);
        for (double& v : f) v = rng.normal();
        for (double& v : g) v = rng.normal();
        auto rr = line_search_interval(s, f, g, 0.0, 1.0);
        CHECK(rr.lambda >= 0.0);
        CHECK(rr.lambda <= 1.0);
        for (double l : {0.0, 0.25, 0.5, 0.75, 1.0})
            CHECK(rr.residual_norm <= norm(s, add_scaled(f, -l, g)) + 1e-9);
    }
}

TEST_CASE("projection onto a containing span is exact") {
    for (double p : {1.5, 2.0, 3.0}) {
        SpaceLp s(4, p);
        std::vector<Element> span = {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.5, 0.0}};
        Element f = add_scaled(scaled(span[0], 0.7), -1.3, span[1]);
        auto proj = chebyshev_project(s, f, span);
        CHECK(proj.converged);
        CHECK(proj.residual_norm <= 1e-9);
        CHECK(proj.coefficients[0] == doctest::Approx(0.7).epsilon(1e-7));
        CHECK(proj.coefficients[1] == doctest::Approx(-1.3).epsilon(1e-7));
    }
}

TEST_CASE("projection at p = 2 equals orthogonal projection") {
    SpaceLp h(5, 2.0);
    RngStream rng(8);
    std::vector<Element> span;
    for (int j = 0; j < 3; ++j) {
        Element y(5);
        for (double& v : y) v = rng.normal();
        span.push_back(y);
    }
    Element f(5);
    for (double& v : f) v = rng.normal();
    auto proj = chebyshev_project(h, f, span);
    // normal equations residual orthogonality
    for (const Element& y : span) CHECK(std::abs(dot(proj.residual, y)) < 1e-9);
    // orthonormal span: coefficients are inner products
    std::vector<Element> ortho = {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}};
    auto proj2 = chebyshev_project(h, f, ortho);
    CHECK(proj2.coefficients[0] == doctest::Approx(f[0]));
    CHECK(proj2.coefficients[1] == doctest::Approx(f[1]));
}

TEST_CASE("projection at p = 3 beats a coefficient grid and certifies KKT") {
    SpaceLp s(3, 3.0);
    RngStream rng(11);
    for (int rep = 0; rep < 10; ++rep) {
        Element f(3), y1(3), y2(3);
        for (double& v : f) v = rng.normal();
        for (double& v : y1) v = rng.normal();
        for (double& v : y2) v = rng.normal();
        auto proj = chebyshev_project(s, f, {y1, y2});
        REQUIRE(proj.converged);
        CHECK(proj.kkt_violation <= 1e-8);
        double grid_best = 1e300;
        for (double a = -3.0; a <= 3.0; a += 0.01)
            for (double b = -3.0; b <= 3.0; b += 0.01) {
                Element r = f;
                add_scaled_inplace(r, -a, y1);
                add_scaled_inplace(r, -b, y2);
                grid_best = std::min(grid_best, norm(s, r));
            }
        CHECK(proj.residual_norm <= grid_best + 1e-6);
    }
}

TEST_CASE("projection KKT certificate holds for p < 2") {
    SpaceLp s(6, 1.5);
    RngStream rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        Element f(6), y1(6), y2(6);
        for (double& v : f) v = rng.normal();
        for (double& v : y1) v = rng.normal();
        for (double& v : y2) v = rng.normal();
        auto proj = chebyshev_project(s, f, {y1, y2});
        CHECK(proj.converged);
        CHECK(proj.kkt_violation <= 1e-10 * std::max(1.0, norm(s, f)) + 1e-12);
    }
}

TEST_CASE("projection drops dependent span directions") {
    SpaceLp h(3, 2.0);
    Element y1 = {1.0, 0.0, 0.0};
    Element y2 = {0.0, 1.0, 0.0};
    Element y3 = add_scaled(y1, 1.0, y2); // dependent
    Element f = {2.0, 3.0, 1.0};
    auto proj = chebyshev_project(h, f, {y1, y2, y3});
    CHECK(proj.dropped_any);
    CHECK(!proj.kept[2]);
    CHECK(proj.coefficients[2] == 0.0);
    CHECK(proj.residual_norm == doctest::Approx(1.0));
}

TEST_CASE("projection monotone in span growth") {
    RngStream rng(31);
    for (double p : {2.0, 3.0}) {
        SpaceLp s(6, p);
        Element f(6);
        for (double& v : f) v = rng.normal();
        std::vector<Element> span;
        double prev = norm(s, f);
        for (int j = 0; j < 4; ++j) {
            Element y(6);
            for (double& v : y) v = rng.normal();
            span.push_back(y);
            auto proj = chebyshev_project(s, f, span);
            CHECK(proj.residual_norm <= prev + 1e-9);
            prev = proj.residual_norm;
        }
    }
}

TEST_CASE("free relaxation closed forms") {
    SpaceLp h(3, 2.0);
    Element g = {1.0, 0.0, 0.0}, phi = {0.0, 1.0, 0.0};
    Element f = add_scaled(scaled(g, 0.3), 0.7, phi);
    auto fr = free_relax(h, f, g, phi);
    CHECK(fr.w == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fr.lambda == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(fr.residual_norm <= 1e-9);

    // zero previous approximant reduces to the 1-d step
    Element f2 = {0.5, 1.5, 0.0};
    auto fr0 = free_relax(h, f2, Element(3, 0.0), phi);
    auto ls = line_search_1d(h, f2, phi);
    CHECK(fr0.lambda == doctest::Approx(ls.lambda));
    CHECK(fr0.residual_norm == doctest::Approx(ls.residual_norm));
}

TEST_CASE("free relaxation equals the 2x2 normal-equation solution at p = 2") {
    SpaceLp h(4, 2.0);
    RngStream rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        Element f(4), g(4), phi(4);
        for (double& v : f) v = rng.normal();
        for (double& v : g) v = rng.normal();
        for (double& v : phi) v = rng.normal();
        auto fr = free_relax(h, f, g, phi);
        // closed form: minimize over (a, b) of ||f - a g - b phi||_2
        double gg = dot(g, g), pp = dot(phi, phi), gp = dot(g, phi);
        double fg = dot(f, g), fp = dot(f, phi);
        double det = gg * pp - gp * gp;
        double a = (fg * pp - fp * gp) / det;
        double b = (gg * fp - gp * fg) / det;
        CHECK(1.0 - fr.w == doctest::Approx(a).epsilon(1e-9));
        CHECK(fr.lambda == doctest::Approx(b).epsilon(1e-9));
        Element r = f;
        add_scaled_inplace(r, -a, g);
        add_scaled_inplace(r, -b, phi);
        CHECK(fr.residual_norm == doctest::Approx(norm(h, r)).epsilon(1e-9));
    }
}

TEST_CASE("fixed relaxation closed forms and dominance by free relaxation") {
    SpaceLp h(3, 2.0);
    Element g = {1.0, 0.0, 0.0}, phi = {0.0, 1.0, 0.0};
    // r = 0 coincides with the plain 1-d step on the residual
    Element f = {0.4, 0.9, 0.2};
    auto fx0 = fixed_relax(h, f, g, phi, 0.0);
    auto ls = line_search_1d(h, add_scaled(f, -1.0, g), phi);
    CHECK(fx0.lambda == doctest::Approx(ls.lambda));
    CHECK(fx0.residual_norm == doctest::Approx(ls.residual_norm));
    // f = G: lambda is the line search of r G onto phi
    auto fxr = fixed_relax(h, g, g, phi, 0.3);
    auto ls2 = line_search_1d(h, scaled(g, 0.3), phi);
    CHECK(fxr.lambda == doctest::Approx(ls2.lambda));
    CHECK_THROWS(fixed_relax(h, f, g, phi, 1.0));

    RngStream rng(7);
    for (double p : {2.0, 3.0}) {
        SpaceLp s(5, p);
        for (int rep = 0; rep < 20; ++rep) {
            Element ff(5), gg(5), pp(5);
            for (double& v : ff) v = rng.normal();
            for (double& v : gg) v = rng.normal();
            for (double& v : pp) v = rng.normal();
            double r = rng.uniform(0.0, 0.99);
            auto fr = free_relax(s, ff, gg, pp);
            auto fx = fixed_relax(s, ff, gg, pp, r);
            CHECK(fr.residual_norm <= fx.residual_norm + 1e-9);
            if (p == 2.0) {
                // closed form for the fixed step
                Element shifted = add_scaled(ff, -(1.0 - r), gg);
                double lam = dot(shifted, pp) / dot(pp, pp);
                CHECK(fx.lambda == doctest::Approx(lam).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("x-greedy selection") {
    SpaceLp h(3, 2.0);
    Dictionary d = make_canonical(h);
    auto r = x_greedy_select(h, {0.2, -0.7, 0.1}, d);
    CHECK(r.index == 1);
    CHECK(r.lambda == doctest::Approx(-0.7));

    // exact atom: zero residual at that index
    auto r2 = x_greedy_select(h, d.element(2), d);
    CHECK(r2.index == 2);
    CHECK(r2.residual_norm <= 1e-12);

    // p = 3 against a per-element grid
    SpaceLp s(4, 3.0);
    Dictionary rd = make_random_unit(s, 6, 9);
    RngStream rng(10);
    for (int rep = 0; rep < 10; ++rep) {
        Element f(4);
        for (double& v : f) v = rng.normal();
        auto got = x_greedy_select(s, f, rd);
        std::size_t oracle_idx = 0;
        double oracle_best = 1e300;
        for (std::size_t i = 0; i < rd.size(); ++i) {
            double lo = -4.0 * norm(s, f), hi = 4.0 * norm(s, f);
            double best_here = 1e300;
            for (double l = lo; l <= hi; l += (hi - lo) / 4000.0)
                best_here = std::min(best_here, norm(s, add_scaled(f, -l, rd.element(i))));
            if (best_here < oracle_best - 1e-12) {
                oracle_best = best_here;
                oracle_idx = i;
            }
        }
        CHECK(got.index == oracle_idx);
    }
}

TEST_CASE("threshold selection") {
    SpaceLp h(2, 2.0);
    Dictionary d = make_canonical(h);
    DualFunctional f{{0.2, -0.7}};
    auto s1 = threshold_select(f, d, 0.5);
    REQUIRE(s1);
    CHECK(s1->index == 1);
    CHECK(s1->sign == -1);
    CHECK(!threshold_select(f, d, 0.8));
    // tiny threshold matches the argmax index when the max is unique
    auto s2 = threshold_select(f, d, 0.69);
    auto s3 = select_weak(f, d, 1.0);
    REQUIRE(s2);
    REQUIRE(s3);
    CHECK(s2->index == s3->index);
    CHECK_THROWS(threshold_select(f, d, 0.0));
}
