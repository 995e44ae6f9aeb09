#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "greedy/oracle.hpp"
#include "greedy/rng.hpp"

namespace greedy {

namespace {

struct LemmaNames {
    LemmaId id;
    const char* name;
};
constexpr LemmaNames kLemmaNames[] = {
    {LemmaId::LeL1, "LeL1"},   {LemmaId::HL1, "HL1"},   {LemmaId::LeL2, "LeL2"},
    {LemmaId::LeL3, "LeL3"},   {LemmaId::LeL4, "LeL4"}, {LemmaId::LeL5, "LeL5"},
    {LemmaId::LeL6, "LeL6"},   {LemmaId::LeL8, "LeL8"}, {LemmaId::LeL9, "LeL9"},
    {LemmaId::LeL10, "LeL10"}, {LemmaId::LeL11, "LeL11"}, {LemmaId::LeL12, "LeL12"},
};

// infimum over lambda in [0,1] of (-lambda v a + B lambda^q)
double ramp_infimum(double v, double a, double b, double q) {
    if (a <= 0.0) return 0.0;
    double lam = (q == 2.0) ? v * a / (2.0 * b)
                            : std::pow(v * a / (q * b), 1.0 / (q - 1.0));
    if (lam > 1.0) lam = 1.0;
    double penalty = (q == 2.0) ? b * lam * lam : b * std::pow(lam, q);
    return -lam * v * a + penalty;
}

class BoundChecker {
public:
    explicit BoundChecker(std::size_t horizon) {
        keep_all_ = horizon <= 100000;
    }
    void push(RecursionReport& rep, std::size_t m, double a, double bound) {
        if (keep_all_ || rep.sequence.size() <= 1000) rep.sequence.push_back(a);
        if (bound > 0.0) {
            double ratio = a / bound;
            if (ratio > rep.max_ratio) rep.max_ratio = ratio;
            if (ratio > 1.0 + 1e-9 && rep.first_violation < 0) rep.first_violation = long(m);
        }
        rep.final_value = a;
    }

private:
    bool keep_all_ = true;
};

double lel12_constant(double alpha, double beta) {
    double c6 = std::pow(2.0, (1.0 + alpha) / (beta - alpha));
    return 2.0 * std::pow(2.0 * c6, alpha);
}

} // namespace

std::string lemma_name(LemmaId id) {
    for (const auto& e : kLemmaNames)
        if (e.id == id) return e.name;
    return "?";
}

LemmaId lemma_from_name(const std::string& name) {
    for (const auto& e : kLemmaNames)
        if (name == e.name) return e.id;
    throw std::invalid_argument("unknown lemma: " + name);
}

RecursionReport simulate_recursion(const RecursionSpec& spec, bool adversarial,
                                   std::uint64_t seed) {
    RngStream rng = RngStream::derive(seed, "lemma:" + lemma_name(spec.lemma));
    RecursionReport rep;
    BoundChecker chk(spec.horizon);
    const std::size_t n_max = spec.horizon;
    auto slack = [&]() { return adversarial ? 1.0 : rng.uniform(); };

    switch (spec.lemma) {
        case LemmaId::LeL1: {
            if (!(spec.c1 > 0.0) || !(spec.c2 > 0.0))
                throw std::invalid_argument("LeL1: C1, C2 > 0");
            double start_cap = std::min(spec.c1, 1.0 / spec.c2);
            // the extremal trajectory starts inside the basin, not at the cap
            // (the cap maps to zero in one step when C1*C2 = 1)
            double a = adversarial ? 0.5 * start_cap : rng.uniform() * start_cap;
            rep.bound_constant = 1.0;
            chk.push(rep, 0, a, spec.c1); // a_0 <= C1 = bound at m=0
            for (std::size_t m = 1; m <= n_max; ++m) {
                a = slack() * a * (1.0 - a * spec.c2);
                chk.push(rep, m, a, 1.0 / (1.0 / spec.c1 + spec.c2 * double(m)));
            }
            break;
        }
        case LemmaId::HL1: {
            if (!(spec.c1 > 0.0)) throw std::invalid_argument("HL1: C1 > 0");
            double start_cap = std::min(spec.c1, 1.0);
            double a = adversarial ? 0.5 * start_cap : rng.uniform() * start_cap;
            double ysum = 0.0;
            chk.push(rep, 0, a, spec.c1);
            for (std::size_t m = 1; m <= n_max; ++m) {
                double y = rng.uniform(); // schedule y_k in [0,1]
                a = slack() * a * (1.0 - a * y);
                ysum += y;
                chk.push(rep, m, a, 1.0 / (1.0 / spec.c1 + ysum));
            }
            break;
        }
        case LemmaId::LeL2: {
            if (!(spec.a_cap > 0.0)) throw std::invalid_argument("LeL2: A > 0");
            double a = adversarial ? spec.a_cap : rng.uniform() * spec.a_cap;
            chk.push(rep, 1, a, spec.a_cap);
            for (std::size_t m = 2; m <= n_max; ++m) {
                double rhs = a * (1.0 - 2.0 / double(m)) + spec.a_cap / double(m * m);
                a = slack() * rhs;
                chk.push(rep, m, a, spec.a_cap / double(m));
            }
            break;
        }
        case LemmaId::LeL3: {
            double alpha = spec.alpha, gamma = spec.beta, a_big = spec.a_cap;
            if (!(alpha > 0.0 && alpha < gamma && gamma <= 1.0 && a_big > 1.0))
                throw std::invalid_argument("LeL3: 0 < alpha < gamma <= 1, A > 1");
            double big_b = a_big * std::pow(std::pow(2.0, alpha / (gamma - alpha) + 1.0), alpha);
            rep.bound_constant = big_b;
            double a = adversarial ? 1.0 : rng.uniform();
            chk.push(rep, 1, a, big_b);
            for (std::size_t nu = 1; nu + 1 <= n_max; ++nu) {
                if (a >= a_big * std::pow(double(nu), -alpha))
                    a = slack() * a * (1.0 - gamma / double(nu));
                // otherwise keep the maximal allowed value, a itself
                chk.push(rep, nu + 1, a, big_b * std::pow(double(nu + 1), -alpha));
            }
            break;
        }
        case LemmaId::LeL4: {
            double r = spec.r, a_big = spec.a_cap;
            if (!(r > 0.0) || !(a_big > 0.0)) throw std::invalid_argument("LeL4: r, A > 0");
            double cfac = r <= 1.0 ? 1.0 : std::pow(r, r);
            rep.bound_constant = a_big * cfac;
            double a = adversarial ? 0.5 * a_big : rng.uniform() * a_big;
            chk.push(rep, 1, a, a_big * cfac);
            for (std::size_t n = 1; n + 1 <= n_max; ++n) {
                a = slack() * a * (1.0 - std::pow(a / a_big, 1.0 / r));
                chk.push(rep, n + 1, a, a_big * cfac * std::pow(double(n + 1), -r));
            }
            break;
        }
        case LemmaId::LeL5:
        case LemmaId::LeL6: {
            double s = spec.phi_power, a_big = spec.a_cap;
            bool mixed = spec.lemma == LemmaId::LeL6;
            if (!(s >= 1.0) || !(a_big > 0.0))
                throw std::invalid_argument("LeL5/6: phi power >= 1, A > 0");
            auto phi = [&](double x) { return mixed ? 0.5 * (x + std::pow(x, s)) : std::pow(x, s); };
            auto phi_inv = [&](double y) {
                if (y >= 1.0) return 1.0;
                if (!mixed) return std::pow(y, 1.0 / s);
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (phi(mid) < y ? lo : hi) = mid;
                }
                return 0.5 * (lo + hi);
            };
            double beta = mixed ? 0.5 : 1.0;
            double a = adversarial ? 0.5 * a_big : rng.uniform() * a_big;
            chk.push(rep, 1, a, a_big * phi_inv(std::min(1.0, 1.0 / beta)));
            for (std::size_t n = 1; n + 1 <= n_max; ++n) {
                a = slack() * a * (1.0 - phi(a / a_big));
                chk.push(rep, n + 1, a,
                         a_big * phi_inv(std::min(1.0, 1.0 / (beta * double(n + 1)))));
            }
            break;
        }
        case LemmaId::LeL8: {
            double q = spec.q, v = spec.v, b = spec.b_coef, delta = spec.delta, a0 = spec.a0;
            if (!(q > 1.0 && q <= 2.0 && v > 0.0 && v <= 1.0 && b > 0.0 && delta > 0.0 &&
                  delta <= 1.0 && a0 >= 0.0))
                throw std::invalid_argument("LeL8: q in (1,2], v in (0,1], B > 0, delta in (0,1]");
            std::size_t n_lim = std::min<std::size_t>(
                n_max, std::size_t(std::floor(std::pow(delta, -1.0 / q))));
            double p = q / (q - 1.0);
            double c2 = std::min(0.5 * std::pow(2.0 * b, 1.0 - p) * std::pow(v, p),
                                 0.5 * std::pow(a0 + 1.0, 1.0 - p) * v);
            double ctotal = std::max(std::pow(2.0 / c2, q - 1.0),
                                     std::pow(2.0 / c2, 1.0 / p) + 1.0);
            rep.bound_constant = ctotal;
            double a = adversarial ? a0 : rng.uniform() * a0;
            chk.push(rep, 0, a, std::max(a0, 1e-300));
            for (std::size_t m = 1; m <= n_lim; ++m) {
                a = std::max(0.0, a + ramp_infimum(v, a, b, q) + slack() * delta);
                chk.push(rep, m, a, ctotal * std::pow(double(m), 1.0 - q));
            }
            break;
        }
        case LemmaId::LeL9: {
            double q = spec.q, v = spec.v, b = spec.b_coef, c = spec.c_noise;
            if (!(q > 1.0 && v > 0.0 && v <= 1.0 && b > 0.0 && c >= 0.0))
                throw std::invalid_argument("LeL9: q > 1, v in (0,1], B > 0, c >= 0");
            double a = adversarial ? spec.a0 : rng.uniform() * spec.a0;
            chk.push(rep, 0, a, 0.0);
            for (std::size_t m = 1; m <= n_max; ++m) {
                double dk = c / double(m * m); // delta_{m-1} -> 0
                a = std::max(0.0, a + ramp_infimum(v, a, b, q) + slack() * dk);
                chk.push(rep, m, a, 0.0);
                if (rep.first_below_threshold == 0 && a < 1e-3)
                    rep.first_below_threshold = m;
            }
            break;
        }
        case LemmaId::LeL10:
        case LemmaId::LeL11: {
            double q = spec.q, c = spec.c_noise, a0 = spec.a0;
            if (!(q > 1.0 && q <= 2.0 && c >= 0.0 && a0 >= 0.0))
                throw std::invalid_argument("LeL10/11: q in (1,2], c >= 0");
            double p = q / (q - 1.0);
            double w;
            if (spec.lemma == LemmaId::LeL10) {
                double v = spec.v, b = spec.b_coef;
                if (!(v > 0.0 && v <= 1.0 && b > 0.0))
                    throw std::invalid_argument("LeL10: v in (0,1], B > 0");
                double cbar = c * (1.0 + 1.0 / (q - 1.0)); // >= c * zeta(q)
                w = std::min(0.5 * std::pow(2.0 * b, 1.0 - p) * std::pow(v, p),
                             0.5 * std::pow(a0 + cbar, 1.0 - p) * v);
            } else {
                w = spec.w;
                if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("LeL11: w in (0,1]");
                double cap = std::pow(w, -1.0 / (p - 1.0));
                if (!(a0 <= cap && c <= cap / p))
                    throw std::invalid_argument("LeL11: a0, c too large for feasibility");
            }
            double alpha = q - 1.0, beta = 2.0;
            double a_big = std::max({2.0 * a0 + 1.0, std::pow((2.0 + c) / w, 1.0 / (p - 1.0)),
                                     c, 1.0});
            double ctotal = lel12_constant(alpha, beta) * a_big;
            rep.bound_constant = ctotal;
            double a = adversarial ? a0 : rng.uniform() * a0;
            chk.push(rep, 0, a, std::max(a0, 1e-300));
            for (std::size_t m = 1; m <= n_max; ++m) {
                double dk = slack() * c * std::pow(double(m), -q);
                if (spec.lemma == LemmaId::LeL10)
                    a = std::max(0.0, a + ramp_infimum(spec.v, a, spec.b_coef, q) + dk);
                else
                    a = std::max(0.0, a - w * std::pow(a, p) + dk);
                chk.push(rep, m, a, ctotal * std::pow(double(m), 1.0 - q));
            }
            break;
        }
        case LemmaId::LeL12: {
            double alpha = spec.alpha, beta = spec.beta, a_big = spec.a_cap, a0 = spec.a0;
            if (!(alpha > 0.0 && alpha < beta && a_big > 0.0 && a0 < a_big))
                throw std::invalid_argument("LeL12: 0 < alpha < beta, a0 < A");
            double ctotal = lel12_constant(alpha, beta);
            rep.bound_constant = ctotal;
            double a = adversarial ? a0 : rng.uniform() * a0;
            chk.push(rep, 0, a, ctotal * a_big);
            for (std::size_t n = 1; n <= n_max; ++n) {
                double nu = double(n - 1);
                double threshold = n > 1 ? a_big * std::pow(nu, -alpha) : a_big;
                if (n > 1 && a >= threshold) {
                    // conditional decay branch; only reachable for nu >= beta
                    // thanks to the growth cap below, so the factor is >= 0
                    a = std::max(0.0, slack() * a * (1.0 - beta / nu));
                } else {
                    double grown = a + a_big * std::pow(double(n), -alpha) * slack();
                    if (double(n) < beta) {
                        // keep the sequence below the trigger while 1 - beta/n
                        // would be negative (hypothesis feasibility)
                        grown = std::min(grown, 0.999 * a_big * std::pow(double(n), -alpha));
                    }
                    a = grown;
                }
                chk.push(rep, n, a, ctotal * a_big * std::pow(double(n), -alpha));
            }
            break;
        }
    }
    return rep;
}

} // namespace greedy
