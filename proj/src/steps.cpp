#include "greedy/steps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greedy {

namespace {

// derivative (up to the positive factor p) of lambda -> ||f - lambda g||_p^p
double directional_derivative(const SpaceLp& space, const Element& f, const Element& g,
                              double lambda) {
    double h = 0.0;
    double pm1 = space.p - 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r = f[i] - lambda * g[i];
        if (r == 0.0 || g[i] == 0.0) continue;
        double mag = (pm1 == 1.0) ? std::abs(r) : std::pow(std::abs(r), pm1);
        h -= (r > 0.0 ? mag : -mag) * g[i];
    }
    return h;
}

double second_derivative(const SpaceLp& space, const Element& f, const Element& g,
                         double lambda) {
    double h = 0.0;
    double pm2 = space.p - 2.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (g[i] == 0.0) continue;
        double r = std::abs(f[i] - lambda * g[i]);
        if (r == 0.0) {
            if (pm2 < 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        h += (space.p - 1.0) * std::pow(r, pm2) * g[i] * g[i];
    }
    return h;
}

// root of the increasing function h(lambda) inside [lo, hi]; safeguarded
// Newton with bisection fallback
double solve_root(const SpaceLp& space, const Element& f, const Element& g, double lo, double hi,
                  const SolverOptions& opts) {
    double hlo = directional_derivative(space, f, g, lo);
    double hhi = directional_derivative(space, f, g, hi);
    int guard = 0;
    while (hlo > 0.0 && guard++ < 200) {
        double w = std::max(1.0, hi - lo);
        lo -= opts.bracket_growth * w;
        hlo = directional_derivative(space, f, g, lo);
    }
    guard = 0;
    while (hhi < 0.0 && guard++ < 200) {
        double w = std::max(1.0, hi - lo);
        hi += opts.bracket_growth * w;
        hhi = directional_derivative(space, f, g, hi);
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 220; ++it) {
        double hx = directional_derivative(space, f, g, x);
        if (hx > 0.0)
            hi = x;
        else
            lo = x;
        if (hi - lo <= 1e-16 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
        // alternate Newton with plain bisection so the bracket is guaranteed
        // to halve every other step (Newton stagnates near p < 2 kinks)
        if (it % 2 == 1) {
            x = 0.5 * (lo + hi);
            continue;
        }
        double hpx = second_derivative(space, f, g, x);
        double xn = (std::isfinite(hpx) && hpx > 0.0) ? x - hx / hpx : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        x = xn;
    }
    return 0.5 * (lo + hi);
}

} // namespace

LineSearchResult line_search_1d(const SpaceLp& space, const Element& f, const Element& g,
                                const SolverOptions& opts) {
    double ng = norm(space, g);
    if (ng == 0.0) throw std::invalid_argument("line_search_1d: zero direction");
    LineSearchResult out;
    if (space.p == 2.0) {
        double g2 = dot(g, g);
        out.lambda = dot(f, g) / g2;
    } else {
        double b = 2.0 * norm(space, f) / ng + 1.0;
        out.lambda = solve_root(space, f, g, -b, b, opts);
    }
    out.residual_norm = norm(space, add_scaled(f, -out.lambda, g));
    return out;
}

LineSearchResult line_search_interval(const SpaceLp& space, const Element& f, const Element& g,
                                      double lo, double hi, const SolverOptions& opts) {
    double ng = norm(space, g);
    if (ng == 0.0) throw std::invalid_argument("line_search_interval: zero direction");
    LineSearchResult out;
    if (directional_derivative(space, f, g, lo) >= 0.0)
        out.lambda = lo;
    else if (directional_derivative(space, f, g, hi) <= 0.0)
        out.lambda = hi;
    else if (space.p == 2.0)
        out.lambda = std::clamp(dot(f, g) / dot(g, g), lo, hi);
    else
        out.lambda = solve_root(space, f, g, lo, hi, opts);
    out.residual_norm = norm(space, add_scaled(f, -out.lambda, g));
    return out;
}

namespace {

double smoothed_objective(const Mat& y, const Vec& c, const Element& f, double p, double eps2) {
    double v = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        double r = f[i];
        for (std::size_t j = 0; j < y.cols; ++j) r -= y(i, j) * c[j];
        v += std::pow(r * r + eps2, 0.5 * p);
    }
    return v;
}

} // namespace

ProjectionResult chebyshev_project(const SpaceLp& space, const Element& f,
                                   const std::vector<Element>& span, const SolverOptions& opts,
                                   const Vec* warm_start) {
    if (span.empty()) throw std::invalid_argument("chebyshev_project: empty span");
    for (const Element& y : span)
        if (y.size() != space.dim) throw std::invalid_argument("chebyshev_project: dim mismatch");
    const std::size_t n = space.dim, k = span.size();
    Mat yfull(n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) yfull(i, j) = span[j][i];

    ProjectionResult out;
    double nf = norm(space, f);

    // rank screen via least squares (QR diagonal tolerance 1e-10)
    auto ls = solve_least_squares(yfull, f, 1e-10);
    out.kept = ls.kept;
    out.dropped_any = ls.dropped_any;
    std::vector<std::size_t> kept_cols;
    for (std::size_t j = 0; j < k; ++j)
        if (ls.kept[j]) kept_cols.push_back(j);
    Mat y(n, kept_cols.size());
    for (std::size_t j = 0; j < kept_cols.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) y(i, j) = yfull(i, kept_cols[j]);

    const std::size_t kk = kept_cols.size();

    if (space.p == 2.0) {
        Vec c(kk, 0.0);
        for (std::size_t j = 0; j < kk; ++j) c[j] = ls.coeffs[kept_cols[j]];
        out.coefficients.assign(k, 0.0);
        for (std::size_t j = 0; j < kk; ++j) out.coefficients[kept_cols[j]] = c[j];
        out.residual = f;
        for (std::size_t j = 0; j < kk; ++j)
            add_scaled_inplace(out.residual, -c[j], span[kept_cols[j]]);
        out.residual_norm = norm(space, out.residual);
        if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
            out.kkt_violation = 0.0;
        } else {
            DualFunctional fr = norming_functional(space, out.residual);
            double kkt = 0.0;
            for (std::size_t j : kept_cols) kkt = std::max(kkt, std::abs(fr(span[j])));
            out.kkt_violation = kkt;
        }
        out.converged = true;
        return out;
    }

    // p != 2: optimize in an orthonormal basis of the span (Gram-Schmidt with
    // re-orthogonalization). The curvature seen by Newton is then governed by
    // the residual weights alone, not by the span conditioning.
    Mat q = orthonormal_columns(y, 1e-14);
    if (q.cols < kk) {
        // should not happen after the rank screen; report non-convergence
        // with the least-squares surrogate rather than dividing by zero
        out.coefficients = ls.coeffs;
        out.residual = f;
        for (std::size_t j = 0; j < k; ++j)
            if (ls.coeffs[j] != 0.0) add_scaled_inplace(out.residual, -ls.coeffs[j], span[j]);
        out.residual_norm = norm(space, out.residual);
        out.kkt_violation = std::numeric_limits<double>::infinity();
        out.converged = false;
        return out;
    }
    Mat r_fact(kk, kk); // y = q * r_fact
    for (std::size_t j = 0; j < kk; ++j) {
        Vec yj = y.col(j);
        for (std::size_t l = 0; l < kk; ++l) r_fact(l, j) = dot(q.col(l), yj);
    }

    const double p = space.p;
    const double tol = opts.tol_grad * std::max(1.0, nf);

    Vec d(kk, 0.0); // coefficients in the orthonormal basis
    if (warm_start != nullptr && warm_start->size() == k) {
        Element g(n, 0.0);
        for (std::size_t j = 0; j < k; ++j)
            if ((*warm_start)[j] != 0.0) add_scaled_inplace(g, (*warm_start)[j], span[j]);
        d = matvec_t(q, g);
    } else {
        d = matvec_t(q, f); // the least-squares optimum
    }

    // For p < 2 the primal objective has exploding curvature near small
    // residual coordinates, while the dual problem -- parametrized over the
    // orthogonal complement with exponent p' = p/(p-1) > 2 -- is smooth and
    // strictly convex. Solve the dual by damped Newton instead.
    if (p < 2.0 && kk < n) {
        double pd = p / (p - 1.0);
        // complete q to an orthonormal basis: w spans range(q)^perp
        Mat ext(n, n + kk);
        for (std::size_t j = 0; j < kk; ++j)
            for (std::size_t i = 0; i < n; ++i) ext(i, j) = q(i, j);
        for (std::size_t j = 0; j < n; ++j) ext(j, kk + j) = 1.0;
        Mat full = orthonormal_columns(ext, 1e-10);
        const std::size_t nc = full.cols - kk;
        Mat w(n, nc);
        for (std::size_t j = 0; j < nc; ++j)
            for (std::size_t i = 0; i < n; ++i) w(i, j) = full(i, kk + j);

        auto psi = [&](double r) { // sign(r) |r|^{p-1}
            return (r >= 0 ? 1.0 : -1.0) * std::pow(std::abs(r), p - 1.0);
        };
        auto psi_inv = [&](double y) { // sign(y) |y|^{p'-1}
            return (y >= 0 ? 1.0 : -1.0) * std::pow(std::abs(y), pd - 1.0);
        };
        Vec wf = matvec_t(w, f);
        // start from the current primal residual estimate
        Vec z(nc, 0.0);
        {
            Element r0 = f;
            for (std::size_t l = 0; l < kk; ++l) add_scaled_inplace(r0, -d[l], q.col(l));
            Vec psir(n);
            for (std::size_t i = 0; i < n; ++i) psir[i] = psi(r0[i]);
            z = matvec_t(w, psir);
        }
        auto dual_objective = [&](const Vec& zc) {
            Vec y = matvec(w, zc);
            double v = 0.0;
            for (std::size_t i = 0; i < n; ++i) v += std::pow(std::abs(y[i]), pd) / pd;
            return v - dot(wf, zc);
        };
        double mu_d = 0.0;
        for (int it = 0; it < opts.max_iter; ++it) {
            Vec y = matvec(w, z);
            Vec grad(nc, 0.0);
            Mat jac(nc, nc);
            for (std::size_t i = 0; i < n; ++i) {
                double gi = psi_inv(y[i]);
                double hi = (pd - 1.0) * std::pow(std::abs(y[i]), pd - 2.0);
                if (y[i] == 0.0) hi = 0.0;
                for (std::size_t l = 0; l < nc; ++l) {
                    grad[l] += gi * w(i, l);
                    for (std::size_t l2 = l; l2 < nc; ++l2)
                        jac(l, l2) += hi * w(i, l) * w(i, l2);
                }
            }
            for (std::size_t l = 0; l < nc; ++l) {
                grad[l] -= wf[l];
                for (std::size_t l2 = 0; l2 < l; ++l2) jac(l, l2) = jac(l2, l);
            }
            double gn = norm2(grad);
            if (gn <= 1e-15 * std::max(1.0, nf)) break;
            Vec step;
            for (int attempt = 0; attempt < 40; ++attempt) {
                Mat h = jac;
                for (std::size_t l = 0; l < nc; ++l) h(l, l) += mu_d * (1.0 + h(l, l));
                Vec nrhs(nc);
                for (std::size_t l = 0; l < nc; ++l) nrhs[l] = -grad[l];
                auto sol = lu_solve(h, nrhs, 1e-300);
                if (sol) {
                    step = *sol;
                    break;
                }
                mu_d = (mu_d == 0.0) ? 1e-10 : mu_d * 10.0;
            }
            if (step.empty()) break;
            double obj0 = dual_objective(z);
            double tstep = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt) {
                Vec zc(nc);
                for (std::size_t l = 0; l < nc; ++l) zc[l] = z[l] + tstep * step[l];
                if (dual_objective(zc) <= obj0 * (1.0 + 1e-15)) {
                    z = zc;
                    moved = true;
                    break;
                }
                tstep *= 0.5;
            }
            if (moved)
                mu_d *= 0.25;
            else
                mu_d = (mu_d == 0.0) ? 1e-10 : mu_d * 10.0;
        }
        // recover the primal point: r = psi^{-1}(w z), d = q^T (f - r)
        Vec y = matvec(w, z);
        Element r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = psi_inv(y[i]);
        Element fr = f;
        for (std::size_t i = 0; i < n; ++i) fr[i] -= r[i];
        d = matvec_t(q, fr);
    }

    auto finalize = [&](const Vec& d_at) {
        // triangular solve r_fact * c = d for the original-basis coefficients
        Vec c(kk, 0.0);
        for (std::size_t j = kk; j-- > 0;) {
            double s = d_at[j];
            for (std::size_t l = j + 1; l < kk; ++l) s -= r_fact(j, l) * c[l];
            c[j] = s / r_fact(j, j);
        }
        out.coefficients.assign(k, 0.0);
        for (std::size_t j = 0; j < kk; ++j) out.coefficients[kept_cols[j]] = c[j];
        out.residual = f;
        for (std::size_t l = 0; l < kk; ++l)
            add_scaled_inplace(out.residual, -d_at[l], q.col(l));
        out.residual_norm = norm(space, out.residual);
        if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
            out.kkt_violation = 0.0;
            return;
        }
        DualFunctional fr = norming_functional(space, out.residual);
        double kkt = 0.0;
        for (std::size_t j : kept_cols) kkt = std::max(kkt, std::abs(fr(span[j])));
        out.kkt_violation = kkt;
    };

    double eps = 1e-12; // smoothing for p < 2 kinks; harmless for p > 2
    double mu = 0.0;    // Levenberg damping
    finalize(d);
    if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
        out.converged = true;
        return out;
    }

    Vec best_d = d;
    double best_kkt = out.kkt_violation;
    int stalls = 0;
    int eps_rounds = 0;
    int budget = opts.max_iter;
    for (int iter = 0; iter < budget; ++iter) {
        double eps2 = eps * eps;
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) {
            double ri = f[i];
            for (std::size_t j = 0; j < kk; ++j) ri -= q(i, j) * d[j];
            r[i] = ri;
        }
        Vec gvec(kk, 0.0);
        Mat hess(kk, kk);
        for (std::size_t i = 0; i < n; ++i) {
            double s2 = r[i] * r[i] + eps2;
            double gi = p * r[i] * std::pow(s2, 0.5 * p - 1.0);
            double hi = p * std::pow(s2, 0.5 * p - 2.0) * ((p - 1.0) * r[i] * r[i] + eps2);
            for (std::size_t j = 0; j < kk; ++j) {
                gvec[j] -= gi * q(i, j);
                for (std::size_t l = j; l < kk; ++l) hess(j, l) += hi * q(i, j) * q(i, l);
            }
        }
        for (std::size_t j = 0; j < kk; ++j)
            for (std::size_t l = 0; l < j; ++l) hess(j, l) = hess(l, j);

        double obj0 = smoothed_objective(q, d, f, p, eps2);
        Vec step;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Mat h = hess;
            for (std::size_t j = 0; j < kk; ++j) h(j, j) += mu * (1.0 + h(j, j));
            Vec rhs(kk);
            for (std::size_t j = 0; j < kk; ++j) rhs[j] = -gvec[j];
            auto sol = lu_solve(h, rhs, 1e-300);
            if (sol) {
                step = *sol;
                break;
            }
            mu = (mu == 0.0) ? 1e-10 : mu * 10.0;
        }
        if (step.empty()) break;
        // backtracking; accept ties near the floating floor and let the
        // best-kkt bookkeeping decide
        double t = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec dn(kk);
            for (std::size_t j = 0; j < kk; ++j) dn[j] = d[j] + t * step[j];
            double obj = smoothed_objective(q, dn, f, p, eps2);
            if (obj <= obj0 * (1.0 + 1e-15)) {
                d = dn;
                moved = (obj < obj0);
                break;
            }
            t *= 0.5;
        }
        if (moved)
            mu *= 0.25;
        else
            mu = (mu == 0.0) ? 1e-12 : mu * 4.0;

        double prev_resid = out.residual_norm;
        finalize(d);
        if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
            out.converged = true;
            return out;
        }
        bool better = false;
        if (out.kkt_violation < 0.99 * best_kkt) {
            best_kkt = out.kkt_violation;
            best_d = d;
            better = true;
        }
        // still closing in on an exact representation counts as progress
        if (out.residual_norm < 0.999 * prev_resid) better = true;
        stalls = better ? 0 : stalls + 1;
        if (best_kkt <= tol) {
            finalize(best_d);
            out.converged = true;
            return out;
        }
        if (stalls >= (p < 2.0 ? 6 : 12)) {
            if (p < 2.0 && eps_rounds < 2) {
                eps *= 1e-3; // tighten the kink smoothing and continue
                ++eps_rounds;
                mu = 0.0;
                stalls = 0;
                continue;
            }
            break; // hand the rest of the budget to coordinate descent
        }
    }
    // Newton plateau (degenerate or exploding curvature at the optimum):
    // cyclic exact one-dimensional minimizations of the true objective along
    // the orthonormal directions; the objective is C^1 for every 1 < p, so
    // these converge to the projection and each step zeroes one
    // biorthogonality component exactly
    if (best_kkt > tol) {
        int sweep_cap = std::min(opts.max_iter, p < 2.0 ? 30 : 200);
        Element res = f;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < kk; ++l) res[i] -= q(i, l) * d[l];
        for (int sweep = 0; sweep < sweep_cap && best_kkt > tol; ++sweep) {
            for (std::size_t j = 0; j < kk; ++j) {
                auto lsj = line_search_1d(space, res, q.col(j), opts);
                d[j] += lsj.lambda;
                add_scaled_inplace(res, -lsj.lambda, q.col(j));
            }
            finalize(d);
            res = out.residual; // resync against incremental drift
            if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
                out.converged = true;
                return out;
            }
            if (out.kkt_violation < best_kkt) {
                best_kkt = out.kkt_violation;
                best_d = d;
            }
        }
        if (best_kkt <= tol) {
            finalize(best_d);
            out.converged = true;
            return out;
        }
    }

    // p < 2 endgame: the optimum pins some residual coordinates at the |r|^p
    // kink, where Newton and coordinate descent both crawl. Pin the near-zero
    // coordinates exactly and run Newton on the smooth reduced problem.
    if (p < 2.0 && best_kkt > tol) {
        for (int round = 0; round < 4 && best_kkt > tol; ++round) {
            finalize(best_d);
            double rmax = 0.0;
            for (double ri : out.residual) rmax = std::max(rmax, std::abs(ri));
            double anchor_tol = rmax * std::pow(10.0, -3.0 - round);
            std::vector<std::size_t> z;
            for (std::size_t i = 0; i < n; ++i)
                if (std::abs(out.residual[i]) <= anchor_tol) z.push_back(i);
            if (z.empty() || z.size() >= n) break;
            // constraint rows: (q d)_i = f_i for i in z
            Mat cons(z.size(), kk);
            Vec rhs(z.size());
            for (std::size_t zi = 0; zi < z.size(); ++zi) {
                for (std::size_t j = 0; j < kk; ++j) cons(zi, j) = q(z[zi], j);
                rhs[zi] = f[z[zi]];
            }
            // min-norm correction onto the manifold and a null-space basis
            Mat ct = cons.transposed();
            Mat row_basis = orthonormal_columns(ct, 1e-12);
            Vec d0 = best_d;
            {
                // project the constraint violation onto the row space:
                // d0 += C^+ (rhs - C d0) computed through least squares
                Vec viol(z.size());
                Vec cd = matvec(cons, d0);
                for (std::size_t zi = 0; zi < z.size(); ++zi) viol[zi] = rhs[zi] - cd[zi];
                auto corr = solve_least_squares(ct.transposed(), viol, 1e-12);
                for (std::size_t j = 0; j < kk; ++j) d0[j] += corr.coeffs[j];
            }
            // null-space basis: orthonormal complement of the row space
            Mat comp(kk, kk);
            for (std::size_t j = 0; j < kk; ++j) {
                Vec e(kk, 0.0);
                e[j] = 1.0;
                for (std::size_t l = 0; l < row_basis.cols; ++l) {
                    double cproj = dot(row_basis.col(l), e);
                    for (std::size_t i = 0; i < kk; ++i) e[i] -= cproj * row_basis(i, l);
                }
                for (std::size_t i = 0; i < kk; ++i) comp(i, j) = e[i];
            }
            Mat nullb = orthonormal_columns(comp, 1e-10);
            std::size_t nu = nullb.cols;
            Vec u(nu, 0.0);
            double mu2 = 0.0;
            for (int it = 0; it < 60; ++it) {
                Vec dcur = d0;
                for (std::size_t j = 0; j < kk; ++j)
                    for (std::size_t l = 0; l < nu; ++l) dcur[j] += nullb(j, l) * u[l];
                Vec r(n);
                for (std::size_t i = 0; i < n; ++i) {
                    double ri = f[i];
                    for (std::size_t j = 0; j < kk; ++j) ri -= q(i, j) * dcur[j];
                    r[i] = ri;
                }
                // smooth objective over the un-pinned coordinates only
                Vec grad(nu, 0.0);
                Mat hessu(nu, nu);
                std::vector<bool> pinned(n, false);
                for (std::size_t zi : z) pinned[zi] = true;
                for (std::size_t i = 0; i < n; ++i) {
                    if (pinned[i] || r[i] == 0.0) continue;
                    double a = std::abs(r[i]);
                    double gi = p * (r[i] > 0 ? 1.0 : -1.0) * std::pow(a, p - 1.0);
                    double hi = p * (p - 1.0) * std::pow(a, p - 2.0);
                    Vec qrow(nu);
                    for (std::size_t l = 0; l < nu; ++l) {
                        double v = 0.0;
                        for (std::size_t j = 0; j < kk; ++j) v += q(i, j) * nullb(j, l);
                        qrow[l] = v;
                    }
                    for (std::size_t l = 0; l < nu; ++l) {
                        grad[l] -= gi * qrow[l];
                        for (std::size_t l2 = l; l2 < nu; ++l2)
                            hessu(l, l2) += hi * qrow[l] * qrow[l2];
                    }
                }
                for (std::size_t l = 0; l < nu; ++l)
                    for (std::size_t l2 = 0; l2 < l; ++l2) hessu(l, l2) = hessu(l2, l);
                double gn = norm2(grad);
                if (gn <= 1e-15 * (1.0 + nf)) break;
                Vec step;
                for (int attempt = 0; attempt < 30; ++attempt) {
                    Mat h = hessu;
                    for (std::size_t l = 0; l < nu; ++l) h(l, l) += mu2 * (1.0 + h(l, l));
                    Vec nrhs(nu);
                    for (std::size_t l = 0; l < nu; ++l) nrhs[l] = -grad[l];
                    auto sol = lu_solve(h, nrhs, 1e-300);
                    if (sol) {
                        step = *sol;
                        break;
                    }
                    mu2 = (mu2 == 0.0) ? 1e-10 : mu2 * 10.0;
                }
                if (step.empty()) break;
                double tstep = 1.0;
                auto obj_at = [&](const Vec& ucand) {
                    double v = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (pinned[i]) continue;
                        double ri = f[i];
                        for (std::size_t j = 0; j < kk; ++j) {
                            double dj = d0[j];
                            for (std::size_t l = 0; l < nu; ++l) dj += nullb(j, l) * ucand[l];
                            ri -= q(i, j) * dj;
                        }
                        v += std::pow(std::abs(ri), p);
                    }
                    return v;
                };
                double obj0 = obj_at(u);
                bool moved = false;
                for (int bt = 0; bt < 40; ++bt) {
                    Vec ucand(nu);
                    for (std::size_t l = 0; l < nu; ++l) ucand[l] = u[l] + tstep * step[l];
                    if (obj_at(ucand) <= obj0 * (1.0 + 1e-15)) {
                        u = ucand;
                        moved = true;
                        break;
                    }
                    tstep *= 0.5;
                }
                if (!moved) {
                    mu2 = (mu2 == 0.0) ? 1e-10 : mu2 * 10.0;
                    if (mu2 > 1e8) break;
                } else {
                    mu2 *= 0.25;
                }
            }
            Vec dfin = d0;
            for (std::size_t j = 0; j < kk; ++j)
                for (std::size_t l = 0; l < nu; ++l) dfin[j] += nullb(j, l) * u[l];
            finalize(dfin);
            if (out.residual_norm <= 1e-13 * std::max(1.0, nf)) {
                out.converged = true;
                return out;
            }
            if (out.kkt_violation < best_kkt) {
                best_kkt = out.kkt_violation;
                best_d = dfin;
            }
        }
        if (best_kkt <= tol) {
            finalize(best_d);
            out.converged = true;
            return out;
        }
    }
    finalize(best_d);
    out.converged = out.kkt_violation <= tol ||
                    out.residual_norm <= 1e-13 * std::max(1.0, nf);
    return out;
}

FreeRelaxResult free_relax(const SpaceLp& space, const Element& f, const Element& g_prev,
                           const Element& phi, const SolverOptions& opts) {
    FreeRelaxResult out;
    double ng = norm(space, g_prev);
    if (ng == 0.0) {
        auto ls = line_search_1d(space, f, phi, opts);
        out.w = 0.0;
        out.lambda = ls.lambda;
        out.residual_norm = ls.residual_norm;
        out.approximant = scaled(phi, ls.lambda);
        out.residual = add_scaled(f, -ls.lambda, phi);
        return out;
    }
    auto proj = chebyshev_project(space, f, {g_prev, phi}, opts);
    double a = proj.coefficients[0];
    double b = proj.coefficients[1];
    out.w = 1.0 - a;
    out.lambda = b;
    out.residual_norm = proj.residual_norm;
    out.residual = proj.residual;
    out.approximant = add_scaled(scaled(g_prev, a), b, phi);
    return out;
}

FixedRelaxResult fixed_relax(const SpaceLp& space, const Element& f, const Element& g_prev,
                             const Element& phi, double r, const SolverOptions& opts) {
    if (r < 0.0 || r >= 1.0) throw std::invalid_argument("fixed_relax: r in [0,1)");
    FixedRelaxResult out;
    Element shifted = add_scaled(f, -(1.0 - r), g_prev);
    auto ls = line_search_1d(space, shifted, phi, opts);
    out.lambda = ls.lambda;
    out.residual_norm = ls.residual_norm;
    out.approximant = add_scaled(scaled(g_prev, 1.0 - r), ls.lambda, phi);
    return out;
}

XGreedyResult x_greedy_select(const SpaceLp& space, const Element& f, const Dictionary& dict,
                              const SolverOptions& opts) {
    if (norm(space, f) == 0.0) throw std::invalid_argument("x_greedy_select: zero residual");
    XGreedyResult best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dict.size(); ++i) {
        auto ls = line_search_1d(space, f, dict.element(i), opts);
        if (ls.residual_norm < best.residual_norm) {
            best.index = i;
            best.lambda = ls.lambda;
            best.residual_norm = ls.residual_norm;
        }
    }
    return best;
}

std::optional<Selection> threshold_select(const DualFunctional& f, const Dictionary& dict,
                                          double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("threshold_select: delta > 0");
    for (std::size_t i = 0; i < dict.size(); ++i) {
        double v = f(dict.element(i));
        if (std::abs(v) >= delta) return Selection{i, v >= 0.0 ? 1 : -1};
    }
    return std::nullopt;
}

} // namespace greedy
