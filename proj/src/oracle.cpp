#include "greedy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace greedy {

OracleResult best_m_term(const SpaceLp& space, const Dictionary& dict, const Element& f,
                         std::size_t m) {
    OracleResult out;
    if (m == 0) {
        out.value = norm(space, f);
        out.certificate = "sigma_0 = ||f||";
        out.exact = true;
        return out;
    }
    m = std::min(m, dict.size());
    SolverOptions opts;
    opts.tol_grad = 1e-9;
    double best = std::numeric_limits<double>::infinity();
    double worst_kkt = 0.0;
    std::size_t count = 0;
    bool all_converged = true;
    for_each_subset(dict.size(), m, [&](const std::vector<std::size_t>& s) {
        std::vector<Element> span;
        span.reserve(m);
        for (std::size_t i : s) span.push_back(dict.element(i));
        auto proj = chebyshev_project(space, f, span, opts);
        all_converged = all_converged && proj.converged;
        worst_kkt = std::max(worst_kkt, proj.kkt_violation);
        best = std::min(best, proj.residual_norm);
        ++count;
    });
    out.value = best;
    char buf[160];
    std::snprintf(buf, sizeof buf, "exhausted %zu supports of size %zu; worst kkt %.3e", count,
                  m, worst_kkt);
    out.certificate = buf;
    out.exact = (space.p == 2.0) || (all_converged && worst_kkt <= 1e-8);
    return out;
}

OracleResult best_m_term_dnorm(const Dictionary& dict, const Element& f, std::size_t m) {
    OracleResult out;
    const std::size_t n = dict.space().dim;
    const std::size_t big_n = dict.size();
    // rows: atom functionals applied to (f - span * c)
    if (m == 0) {
        out.value = d_seminorm(dict, f);
        out.certificate = "sigma_0 in D-seminorm";
        out.exact = true;
        return out;
    }
    m = std::min(m, big_n);
    double best = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for_each_subset(big_n, m, [&](const std::vector<std::size_t>& s) {
        Mat rows(big_n, m);
        Vec rhs(big_n);
        for (std::size_t i = 0; i < big_n; ++i) {
            const Vec& fi = dict.atom_functional(i);
            rhs[i] = dot(fi, f);
            for (std::size_t j = 0; j < m; ++j) {
                double v = 0.0;
                for (std::size_t k = 0; k < n; ++k) v += fi[k] * dict.element(s[j])[k];
                rows(i, j) = v;
            }
        }
        best = std::min(best, linf_fit(rows, rhs).value);
        ++count;
    });
    out.value = best;
    char buf[120];
    std::snprintf(buf, sizeof buf, "exhausted %zu supports; inner solve: exact linf LP", count);
    out.certificate = buf;
    out.exact = true;
    return out;
}

double svd_tail(const Mat& matrix, std::size_t m) {
    auto svd = jacobi_svd(matrix);
    double s = 0.0;
    for (std::size_t j = m; j < svd.s.size(); ++j) s += svd.s[j] * svd.s[j];
    return std::sqrt(s);
}

BoundReport check_theorem_bound(const Trace& trace,
                                const std::function<double(std::size_t)>& bound, double tol) {
    BoundReport rep;
    std::vector<double> ratios(trace.records.size(), 0.0);
    for (std::size_t m = 1; m < trace.records.size(); ++m) {
        double b = bound(m);
        if (!(b > 0.0)) throw std::invalid_argument("check_theorem_bound: bound must be > 0");
        double ratio = trace.records[m].residual_norm / b;
        ratios[m] = ratio;
        if (ratio > rep.max_ratio) rep.max_ratio = ratio;
        if (ratio > 1.0 + tol && rep.first_violation < 0) rep.first_violation = long(m);
    }
    // unbounded-growth probe for existential constants: ratio at m vs m/2
    // increasing by > 5% repeatedly
    int growth_hits = 0;
    for (std::size_t m = 8; m < ratios.size(); m *= 2) {
        if (ratios[m] > 1.05 * std::max(ratios[m / 2], 1e-300)) ++growth_hits;
        if (growth_hits >= 3) rep.growth_flag = true;
    }
    return rep;
}

} // namespace greedy
