#pragma once

#include <optional>
#include <vector>

#include "greedy/dictionary.hpp"
#include "greedy/space.hpp"

namespace greedy {

struct SolverOptions {
    double tol_grad = 1e-10;
    int max_iter = 500;
    double bracket_growth = 2.0;
};

struct LineSearchResult {
    double lambda = 0.0;
    double residual_norm = 0.0;
};

// Best one-dimensional approximation: lambda minimizing ||f - lambda g||_p.
// Closed form at p = 2; safeguarded Newton on the derivative otherwise.
LineSearchResult line_search_1d(const SpaceLp& space, const Element& f, const Element& g,
                                const SolverOptions& opts = {});
// Same, restricted to lambda in [lo, hi].
LineSearchResult line_search_interval(const SpaceLp& space, const Element& f, const Element& g,
                                      double lo, double hi, const SolverOptions& opts = {});

struct ProjectionResult {
    Vec coefficients;        // one per span element; zero for dropped columns
    Element residual;
    double residual_norm = 0.0;
    double kkt_violation = 0.0; // max_j |F_residual(y_j)| over kept columns
    bool converged = true;
    bool dropped_any = false;   // some span directions were linearly dependent
    std::vector<bool> kept;
};

// Chebyshev projection onto span(span): coefficients minimizing
// ||f - sum c_j y_j||_p. Least squares at p = 2; damped Newton on the
// smoothed p-th power objective otherwise, certified by the biorthogonality
// condition max_j |F_res(y_j)| <= tol_grad * max(1, ||f||).
ProjectionResult chebyshev_project(const SpaceLp& space, const Element& f,
                                   const std::vector<Element>& span,
                                   const SolverOptions& opts = {},
                                   const Vec* warm_start = nullptr);

struct FreeRelaxResult {
    double w = 0.0;
    double lambda = 0.0;
    double residual_norm = 0.0;
    Element approximant; // (1-w) g_prev + lambda phi
    Element residual;
};
// Minimizes ||f - ((1-w) g_prev + lambda phi)|| over (w, lambda).
FreeRelaxResult free_relax(const SpaceLp& space, const Element& f, const Element& g_prev,
                           const Element& phi, const SolverOptions& opts = {});

struct FixedRelaxResult {
    double lambda = 0.0;
    double residual_norm = 0.0;
    Element approximant; // (1-r) g_prev + lambda phi
};
// Fixed relaxation: lambda from the 1-d step on f - (1-r) g_prev.
FixedRelaxResult fixed_relax(const SpaceLp& space, const Element& f, const Element& g_prev,
                             const Element& phi, double r, const SolverOptions& opts = {});

struct XGreedyResult {
    std::size_t index = 0;
    double lambda = 0.0;
    double residual_norm = 0.0;
};
// argmin over dictionary elements of the best 1-d residual; lowest index wins
// ties.
XGreedyResult x_greedy_select(const SpaceLp& space, const Element& f, const Dictionary& dict,
                              const SolverOptions& opts = {});

// Lowest-index element with |F(g)| >= delta, or nullopt (caller stops).
std::optional<Selection> threshold_select(const DualFunctional& f, const Dictionary& dict,
                                          double delta);

} // namespace greedy
