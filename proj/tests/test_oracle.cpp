#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "greedy/algorithms.hpp"
#include "greedy/oracle.hpp"
#include "greedy/rng.hpp"

using namespace greedy;

TEST_CASE("best m-term on the canonical dictionary") {
    SpaceLp h(3, 2.0);
    Dictionary d = make_canonical(h);
    Element f = {1.0, 0.5, 0.25};
    auto s1 = best_m_term(h, d, f, 1);
    CHECK(s1.value == doctest::Approx(std::sqrt(0.25 * 0.25 + 0.5 * 0.5)));
    CHECK(s1.exact);
    auto s0 = best_m_term(h, d, f, 0);
    CHECK(s0.value == doctest::Approx(norm(h, f)));
    auto s3 = best_m_term(h, d, f, 3);
    CHECK(s3.value <= 1e-12);
}

TEST_CASE("sigma_m is non-increasing and vanishes at full rank") {
    SpaceLp s(6, 3.0);
    Dictionary d = make_random_unit(s, 8, 3);
    RngStream rng(4);
    Element f(6);
    for (double& v : f) v = rng.normal();
    double prev = 1e300;
    for (std::size_t m = 0; m <= 6; ++m) {
        auto r = best_m_term(s, d, f, m);
        CHECK(r.value <= prev + 1e-9);
        prev = r.value;
    }
    CHECK(prev <= 1e-7); // 6 independent atoms span the space
}

TEST_CASE("sigma_m certificate counts every support") {
    SpaceLp s(8, 3.0);
    Dictionary d = make_random_unit(s, 8, 5);
    RngStream rng(6);
    Element f(8);
    for (double& v : f) v = rng.normal();
    auto r = best_m_term(s, d, f, 2);
    CHECK(r.certificate.find("28 supports") != std::string::npos);
    CHECK(r.exact); // every inner solve is KKT-certified
}

TEST_CASE("algorithm residuals never beat the oracle") {
    SpaceLp s(6, 2.0);
    Dictionary d = make_random_unit(s, 9, 8);
    RngStream rng(7);
    auto a1 = sample_A1(d, 5, rng);
    Schedules sch;
    sch.weakness = Schedule::constant(1.0);
    for (AlgorithmId id : {AlgorithmId::WCGA, AlgorithmId::WDGA, AlgorithmId::WGAFR}) {
        Trace tr = run_algorithm(id, s, d, a1.combined, 3, sch, {});
        for (std::size_t m = 1; m < tr.records.size(); ++m) {
            auto sigma = best_m_term(s, d, a1.combined, m);
            CHECK(tr.records[m].residual_norm >= sigma.value - 1e-9);
        }
    }
}

TEST_CASE("oracle guard rejects huge enumerations") {
    SpaceLp s(4, 2.0);
    Dictionary d = make_random_unit(s, 50, 2);
    Element f(4, 1.0);
    CHECK_THROWS(best_m_term(s, d, f, 12)); // C(50,12) > 1e6
}

TEST_CASE("d-seminorm oracle on small instances") {
    Dictionary d = make_equiangular(6, 0.1);
    const SpaceLp& s = d.space();
    RngStream rng(11);
    Element f(s.dim);
    for (double& v : f) v = rng.normal();
    auto r1 = best_m_term_dnorm(d, f, 1);
    // grid oracle over the best single-atom coefficient
    double oracle = 1e300;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (double c = -4.0; c <= 4.0; c += 1e-3) {
            Element g = add_scaled(f, -c, d.element(i));
            oracle = std::min(oracle, d_seminorm(d, g));
        }
    }
    CHECK(r1.value <= oracle + 1e-6);
    CHECK(r1.value >= oracle - 0.02); // grid resolution slack
    auto r0 = best_m_term_dnorm(d, f, 0);
    CHECK(r0.value == doctest::Approx(d_seminorm(d, f)));
}

TEST_CASE("svd tail identities") {
    Mat rank1(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j) rank1(i, j) = double(i + 1) * double(j + 1);
    CHECK(svd_tail(rank1, 1) <= 1e-9);

    Mat eye = Mat::identity(3);
    CHECK(svd_tail(eye, 1) == doctest::Approx(std::sqrt(2.0)));
    CHECK(svd_tail(eye, 0) == doctest::Approx(std::sqrt(3.0)));

    RngStream rng(5);
    Mat a(6, 5);
    for (double& x : a.data) x = rng.normal();
    double frob = 0.0;
    for (double x : a.data) frob += x * x;
    CHECK(svd_tail(a, 0) == doctest::Approx(std::sqrt(frob)).epsilon(1e-9));
    double prev = 1e300;
    for (std::size_t m = 0; m <= 5; ++m) {
        double t = svd_tail(a, m);
        CHECK(t <= prev + 1e-12);
        prev = t;
    }
    CHECK(svd_tail(a, 5) == 0.0);
}

TEST_CASE("check_theorem_bound flags violations and growth") {
    Trace tr;
    tr.records.resize(65);
    for (std::size_t m = 0; m < tr.records.size(); ++m) {
        tr.records[m].m = m;
        tr.records[m].residual_norm = 1.0 / std::sqrt(double(m + 1));
    }
    auto rep = check_theorem_bound(
        tr, [](std::size_t m) { return 2.0 / std::sqrt(double(m)); });
    CHECK(rep.max_ratio < 1.0);
    CHECK(rep.first_violation == -1);
    CHECK(!rep.growth_flag);

    auto bad = check_theorem_bound(tr, [](std::size_t m) {
        return 0.1 / double(m); // decays faster than the trace
    });
    CHECK(bad.first_violation >= 1);
    CHECK(bad.growth_flag);
    CHECK_THROWS(check_theorem_bound(tr, [](std::size_t) { return 0.0; }));
}

TEST_CASE("lemma simulators: adversarial runs respect their bounds") {
    for (LemmaId id : {LemmaId::LeL1, LemmaId::HL1, LemmaId::LeL2, LemmaId::LeL3,
                       LemmaId::LeL4, LemmaId::LeL5, LemmaId::LeL6, LemmaId::LeL8,
                       LemmaId::LeL10, LemmaId::LeL11, LemmaId::LeL12}) {
        RecursionSpec spec;
        spec.lemma = id;
        spec.horizon = 20000;
        spec.c1 = 1.0;
        spec.c2 = 1.0;
        spec.a_cap = 2.0;
        spec.alpha = 0.5;
        spec.beta = (id == LemmaId::LeL3) ? 0.9 : 2.0;
        spec.r = 0.7;
        spec.q = 1.7;
        spec.v = 0.5;
        spec.b_coef = 1.0;
        spec.delta = 1e-4;
        spec.w = 0.5;
        spec.c_noise = 0.05;
        spec.phi_power = 2.0;
        spec.a0 = (id == LemmaId::LeL12) ? 1.0 : 0.8;
        auto rep = simulate_recursion(spec, true, 3);
        INFO(lemma_name(id));
        CHECK(rep.first_violation == -1);
        CHECK(rep.max_ratio <= 1.0 + 1e-9);
    }
}

TEST_CASE("lemma LeL1 equality dynamics approach the bound") {
    RecursionSpec spec;
    spec.lemma = LemmaId::LeL1;
    spec.horizon = 100000;
    spec.c1 = 1.0;
    spec.c2 = 1.0;
    auto rep = simulate_recursion(spec, true, 1);
    CHECK(rep.first_violation == -1);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
    CHECK(rep.max_ratio > 0.45); // the trajectory tracks the bound
}

TEST_CASE("lemma LeL2 equality dynamics have ratio approaching one") {
    RecursionSpec spec;
    spec.lemma = LemmaId::LeL2;
    spec.horizon = 10000;
    spec.a_cap = 1.0;
    auto rep = simulate_recursion(spec, true, 1);
    CHECK(rep.first_violation == -1);
    // terminal ratio a_m * m / A is in the -> 1 region
    CHECK(rep.final_value * double(spec.horizon) / spec.a_cap > 0.9);
    CHECK(rep.max_ratio <= 1.0 + 1e-9);
}

TEST_CASE("lemma LeL9 sequences decay to zero") {
    RecursionSpec spec;
    spec.lemma = LemmaId::LeL9;
    spec.horizon = 1000000;
    spec.q = 2.0;
    spec.v = 1.0;
    spec.b_coef = 1.0;
    spec.c_noise = 1.0;
    spec.a0 = 1.0;
    auto rep = simulate_recursion(spec, true, 1);
    CHECK(rep.first_below_threshold > 0);
    CHECK(rep.first_below_threshold <= 1000000);
}

TEST_CASE("lemma simulators reject hypothesis violations") {
    RecursionSpec bad;
    bad.lemma = LemmaId::LeL3;
    bad.alpha = 0.9;
    bad.beta = 0.5; // needs alpha < gamma
    CHECK_THROWS(simulate_recursion(bad, true, 1));
    RecursionSpec bad2;
    bad2.lemma = LemmaId::LeL8;
    bad2.q = 3.0; // q must lie in (1,2]
    CHECK_THROWS(simulate_recursion(bad2, true, 1));
    RecursionSpec bad3;
    bad3.lemma = LemmaId::LeL11;
    bad3.w = 0.5;
    bad3.c_noise = 100.0; // breaks feasibility of the recursion
    CHECK_THROWS(simulate_recursion(bad3, true, 1));
}

TEST_CASE("randomized lemma runs stay within bounds") {
    RngStream seeds(99);
    for (LemmaId id : {LemmaId::LeL1, LemmaId::HL1, LemmaId::LeL4, LemmaId::LeL5,
                       LemmaId::LeL8, LemmaId::LeL11}) {
        for (int rep = 0; rep < 30; ++rep) {
            RecursionSpec spec;
            spec.lemma = id;
            spec.horizon = 2000;
            spec.c1 = seeds.uniform(0.2, 3.0);
            spec.c2 = seeds.uniform(0.2, 3.0);
            spec.a_cap = seeds.uniform(0.5, 3.0);
            spec.r = seeds.uniform(0.2, 2.0);
            spec.q = seeds.uniform(1.2, 2.0);
            spec.v = seeds.uniform(0.1, 1.0);
            spec.b_coef = seeds.uniform(0.5, 2.0);
            spec.delta = seeds.uniform(1e-5, 1.0);
            spec.w = seeds.uniform(0.1, 1.0);
            spec.phi_power = seeds.uniform(1.0, 3.0);
            spec.a0 = seeds.uniform(0.0, 1.0);
            spec.c_noise = seeds.uniform(0.0, 0.2);
            auto out = simulate_recursion(spec, false, seeds.next_u64());
            INFO(lemma_name(id));
            CHECK(out.first_violation == -1);
        }
    }
}
