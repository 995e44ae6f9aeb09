#pragma once

#include <functional>
#include <string>

#include "greedy/dictionary.hpp"
#include "greedy/steps.hpp"
#include "greedy/trace.hpp"

namespace greedy {

struct OracleResult {
    double value = 0.0;
    std::string certificate; // what was exhausted to certify the value
    bool exact = false;      // exhaustive finite search with exact inner solves
};

// Best m-term approximation error sigma_m(f, D): exhaustive over all
// m-element supports, exact least squares at p = 2, KKT-certified convex
// solves otherwise. Guard: C(N, m) <= 1e6.
OracleResult best_m_term(const SpaceLp& space, const Dictionary& dict, const Element& f,
                         std::size_t m);

// Same error measured in the D-seminorm max_g |F_g(f - h)|; the inner
// minimization over coefficients is a Chebyshev linear fit solved exactly.
OracleResult best_m_term_dnorm(const Dictionary& dict, const Element& f, std::size_t m);

// sqrt(sum of squared singular values beyond the m-th), descending order.
double svd_tail(const Mat& matrix, std::size_t m);

// Uniform evaluator of a residual trace against a closed-form bound.
struct BoundReport {
    double max_ratio = 0.0;
    long first_violation = -1; // iteration index, -1 if none
    bool growth_flag = false;  // existential-constant reading: fitted ratio grows
};
BoundReport check_theorem_bound(const Trace& trace,
                                const std::function<double(std::size_t)>& bound,
                                double tol = 1e-9);

// --- numerical-sequence lemma simulators (recursive inequality stress) -----

enum class LemmaId {
    LeL1,
    HL1,
    LeL2,
    LeL3,
    LeL4,
    LeL5,
    LeL6,
    LeL8,
    LeL9,
    LeL10,
    LeL11,
    LeL12
};
std::string lemma_name(LemmaId id);
LemmaId lemma_from_name(const std::string& name);

struct RecursionSpec {
    LemmaId lemma = LemmaId::LeL1;
    std::size_t horizon = 1000;
    // generic parameter slots; interpretation depends on the lemma
    double c1 = 1.0;          // LeL1 / HL1
    double c2 = 1.0;          // LeL1
    double a_cap = 1.0;       // A in LeL2/LeL3/LeL4/LeL5/LeL6/LeL12
    double alpha = 0.5;       // LeL3 / LeL12
    double beta = 1.0;        // LeL3 (gamma there) / LeL12
    double r = 0.5;           // LeL4
    double q = 2.0;           // LeL8/LeL9/LeL10/LeL11
    double v = 1.0;           // LeL8/LeL9/LeL10
    double b_coef = 1.0;      // B in LeL8/LeL9/LeL10
    double delta = 0.01;      // LeL8
    double w = 0.5;           // LeL11
    double c_noise = 1.0;     // c in LeL10/LeL11 (delta_k <= c (k+1)^-q)
    double phi_power = 2.0;   // LeL5 phi(x) = x^s; LeL6 phi(x) = (x + x^s)/2
    double a0 = 1.0;          // starting value cap where applicable
};

struct RecursionReport {
    std::vector<double> sequence; // a_0 .. a_N (may be truncated for huge N)
    double max_ratio = 0.0;       // max over m of a_m / bound(m)
    long first_violation = -1;
    double bound_constant = 0.0;  // the explicit constant used in the bound
    double final_value = 0.0;
    std::size_t first_below_threshold = 0; // LeL9 limit proxy (0 = never)
};

// Generates a sequence saturating the lemma's recursive inequality
// (adversarial: extremal choices; otherwise uniformly random slack) and
// verifies the conclusion bound pointwise. Throws on hypothesis violations.
RecursionReport simulate_recursion(const RecursionSpec& spec, bool adversarial,
                                   std::uint64_t seed);

} // namespace greedy
