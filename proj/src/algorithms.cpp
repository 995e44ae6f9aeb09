#include "greedy/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace greedy {

namespace {

void validate_input(const SpaceLp& space, const Element& f) {
    if (f.size() != space.dim) throw std::invalid_argument("run: dimension mismatch");
    for (double x : f)
        if (!std::isfinite(x)) throw std::invalid_argument("run: target must be finite");
}

double weakness_at(const Schedules& sch, std::size_t m) {
    double t = sch.weakness.value(m);
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("weakness schedule must lie in (0,1]");
    return t;
}

std::vector<ApproxTerm> snapshot(const Vec& coeffs) {
    std::vector<ApproxTerm> out;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0.0) out.push_back({i, coeffs[i]});
    return out;
}

struct Runner {
    const SpaceLp& space;
    const Dictionary& dict;
    const Element& f;
    std::size_t m_max;
    const Schedules& sch;
    const RunOptions& opt;

    Trace trace;
    Element residual;
    Element approx;
    Vec coeffs; // signed coefficient per dictionary index
    std::optional<RngStream> realization;

    Runner(AlgorithmId id, const SpaceLp& s, const Dictionary& d, const Element& f_,
           std::size_t mm, const Schedules& sc, const RunOptions& op)
        : space(s), dict(d), f(f_), m_max(mm), sch(sc), opt(op) {
        validate_input(s, f_);
        trace.algorithm = id;
        trace.dim = s.dim;
        trace.p = s.p;
        trace.dictionary_fingerprint = d.fingerprint();
        trace.schedule_note = "t=" + sc.weakness.describe();
        residual = f_;
        approx.assign(s.dim, 0.0);
        coeffs.assign(d.size(), 0.0);
        if (op.realization_seed) {
            realization.emplace(RngStream::derive(*op.realization_seed, "realization"));
            trace.seed = *op.realization_seed;
        }
        TraceRecord r0;
        r0.m = 0;
        r0.residual_norm = norm(s, residual);
        if (r0.residual_norm > 0.0)
            r0.dnorm_f = d_norm(norming_functional(s, residual), d).value;
        trace.records.push_back(r0);
    }

    bool stopped() const { return trace.stop != StopReason::None; }

    // returns false when the run should stop before iteration m
    bool pre_iteration() {
        if (trace.records.back().residual_norm <= opt.zero_tol) {
            trace.stop = StopReason::ZeroResidual;
            return false;
        }
        return true;
    }

    void push(TraceRecord rec) {
        rec.m = trace.records.size();
        rec.approx = snapshot(coeffs);
        double mass = 0.0;
        for (double c : coeffs) mass += std::abs(c);
        rec.approx_l1_mass = mass;
        trace.records.push_back(rec);
    }

    Trace finish() {
        if (trace.stop == StopReason::None && trace.records.size() == m_max + 1)
            trace.stop = StopReason::MaxIterations;
        trace.final_approximant = snapshot(coeffs);
        return std::move(trace);
    }

    Element signed_atom(const Selection& sel) const {
        return sel.sign > 0 ? dict.element(sel.index) : scaled(dict.element(sel.index), -1.0);
    }
};

// ---------------------------------------------------------------------------
// plain dual-greedy expansion family: WDGA, GAWR, DGA_C, DGA_BMU, MDGA
// ---------------------------------------------------------------------------

Trace run_wdga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                    AlgorithmId id) {
    Runner run(id, space, dict, f, m_max, sch, opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        DualFunctional F = norming_functional(space, run.residual);
        DNormResult dn = d_norm(F, dict);
        if (dn.value <= opt.zero_tol) {
            run.trace.stop = StopReason::ZeroFunctional;
            break;
        }
        auto sel = select_weak(F, dict, weakness_at(sch, m), TieRule::LowestIndex,
                               run.realization ? &*run.realization : nullptr);
        Element phi = run.signed_atom(*sel);
        auto ls = line_search_1d(space, run.residual, phi, opt.solver);
        add_scaled_inplace(run.residual, -ls.lambda, phi);
        run.coeffs[sel->index] += sel->sign * ls.lambda;
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.lambda = ls.lambda;
        rec.residual_norm = ls.residual_norm;
        rec.dnorm_f = dn.value;
        run.push(rec);
    }
    return run.finish();
}

Trace run_gawr_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                    bool x_greedy) {
    Runner run(x_greedy ? AlgorithmId::XGAR : AlgorithmId::GAWR, space, dict, f, m_max, sch, opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double r = sch.relaxation.value(m);
        if (r < 0.0 || r >= 1.0) throw std::invalid_argument("relaxation must lie in [0,1)");
        TraceRecord rec;
        Selection sel;
        if (x_greedy) {
            auto xg = x_greedy_select(space, run.residual, dict, opt.solver);
            sel.index = xg.index;
            sel.sign = 1;
            rec.dnorm_f = d_norm(norming_functional(space, run.residual), dict).value;
        } else {
            DualFunctional F = norming_functional(space, run.residual);
            DNormResult dn = d_norm(F, dict);
            if (dn.value <= opt.zero_tol) {
                run.trace.stop = StopReason::ZeroFunctional;
                break;
            }
            auto s = select_weak(F, dict, weakness_at(sch, m), TieRule::LowestIndex,
                                 run.realization ? &*run.realization : nullptr);
            sel = *s;
            rec.dnorm_f = dn.value;
        }
        Element phi = run.signed_atom(sel);
        auto fr = fixed_relax(space, f, run.approx, phi, r, opt.solver);
        run.approx = fr.approximant;
        for (double& c : run.coeffs) c *= (1.0 - r);
        run.coeffs[sel.index] += sel.sign * fr.lambda;
        run.residual = add_scaled(f, -1.0, run.approx);
        rec.selected_index = long(sel.index);
        rec.sign = sel.sign;
        rec.lambda = fr.lambda;
        rec.residual_norm = fr.residual_norm;
        run.push(rec);
    }
    return run.finish();
}

Trace run_coeff_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                     std::size_t m_max, const Schedules& sch, const RunOptions& opt, bool dual) {
    Runner run(dual ? AlgorithmId::DGA_C : AlgorithmId::XGA_C, space, dict, f, m_max, sch, opt);
    Schedule coeffs = sch.coefficients;
    if (coeffs.kind() == Schedule::Kind::Constant && coeffs.constant_value() == 0.0) {
        // canonical schedule c_k = k^{-s}, s = (1 + 1/q)/2
        SmoothnessParams sp = smoothness_params(space);
        coeffs = Schedule::power(1.0, (1.0 + 1.0 / sp.q) / 2.0);
    }
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double c = coeffs.value(m);
        if (!(c > 0.0)) throw std::invalid_argument("coefficient schedule must be positive");
        TraceRecord rec;
        Selection sel;
        if (dual) {
            DualFunctional F = norming_functional(space, run.residual);
            DNormResult dn = d_norm(F, dict);
            if (dn.value <= opt.zero_tol) {
                run.trace.stop = StopReason::ZeroFunctional;
                break;
            }
            sel = *select_weak(F, dict, weakness_at(sch, m), TieRule::LowestIndex,
                               run.realization ? &*run.realization : nullptr);
            rec.dnorm_f = dn.value;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < dict.size(); ++i)
                for (int s : {1, -1}) {
                    double v = norm(space, add_scaled(run.residual, -double(s) * c,
                                                      dict.element(i)));
                    if (v < best) {
                        best = v;
                        sel.index = i;
                        sel.sign = s;
                    }
                }
            rec.dnorm_f = d_norm(norming_functional(space, run.residual), dict).value;
        }
        add_scaled_inplace(run.residual, -double(sel.sign) * c, dict.element(sel.index));
        run.coeffs[sel.index] += sel.sign * c;
        rec.selected_index = long(sel.index);
        rec.sign = sel.sign;
        rec.c = c;
        rec.residual_norm = norm(space, run.residual);
        run.push(rec);
    }
    return run.finish();
}

Trace run_dga_bmu_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                       std::size_t m_max, const Schedules& sch, const RunOptions& opt) {
    if (!(opt.b > 0.0) || opt.b > 1.0)
        throw std::invalid_argument("dga_bmu: b must lie in (0,1]");
    SmoothnessParams sp = smoothness_params(space);
    Runner run(AlgorithmId::DGA_BMU, space, dict, f, m_max, sch, opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double t = weakness_at(sch, m);
        DualFunctional F = norming_functional(space, run.residual);
        DNormResult dn = d_norm(F, dict);
        if (dn.value <= opt.zero_tol) {
            run.trace.stop = StopReason::ZeroFunctional;
            break;
        }
        auto sel = select_weak(F, dict, t, TieRule::LowestIndex,
                               run.realization ? &*run.realization : nullptr);
        double nr = run.trace.records.back().residual_norm;
        // mu(c/||f||) * ||f|| = (t b / 2) c ||F||_D with mu(u) = gamma u^q
        double c = nr * std::pow(t * opt.b * dn.value / (2.0 * sp.gamma), 1.0 / (sp.q - 1.0));
        add_scaled_inplace(run.residual, -double(sel->sign) * c, dict.element(sel->index));
        run.coeffs[sel->index] += sel->sign * c;
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.c = c;
        rec.residual_norm = norm(space, run.residual);
        rec.dnorm_f = dn.value;
        run.push(rec);
    }
    return run.finish();
}

Trace run_mdga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt) {
    if (!(opt.b > 0.0) || opt.b >= 1.0)
        throw std::invalid_argument("mdga: b must lie in (0,1)");
    SmoothnessParams sp = smoothness_params(space);
    Runner run(AlgorithmId::MDGA, space, dict, f, m_max, sch, opt);
    double coeff_sum = 0.0;
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double t = weakness_at(sch, m);
        double nr = run.trace.records.back().residual_norm;
        double threshold = t * nr / (1.0 + coeff_sum);
        DualFunctional F = norming_functional(space, run.residual);
        auto sel = threshold_select(F, dict, threshold);
        if (!sel) {
            run.trace.stop = StopReason::ThresholdEmpty;
            break;
        }
        // mu(c/||f||) = (t b / 2) c (1 + sum_{j<m} c_j)^{-1}
        double c = std::pow(t * opt.b * std::pow(nr, sp.q) /
                                (2.0 * sp.gamma * (1.0 + coeff_sum)),
                            1.0 / (sp.q - 1.0));
        add_scaled_inplace(run.residual, -double(sel->sign) * c, dict.element(sel->index));
        run.coeffs[sel->index] += sel->sign * c;
        coeff_sum += c;
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.c = c;
        rec.residual_norm = norm(space, run.residual);
        rec.dnorm_f = d_norm(F, dict).value;
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// WBGA family (WCGA / WGAFR / RWRGA) with optional controlled errors
// ---------------------------------------------------------------------------

enum class WbgaKind { Chebyshev, FreeRelax, Rescaled };

// largest s >= 0 with || f - (base + s * dir) || == target, found by
// bisection; obj(s) is convex with minimum at s = 0
double inflate_to_target(const SpaceLp& space, const Element& f, const Element& base,
                         const Element& dir, double target) {
    auto obj = [&](double s) {
        Element g = add_scaled(base, s, dir);
        return norm(space, add_scaled(f, -1.0, g));
    };
    double hi = 1.0;
    int guard = 0;
    while (obj(hi) < target && guard++ < 200) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (obj(mid) < target ? lo : hi) = mid;
    }
    return lo;
}

Trace run_wbga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                    WbgaKind kind, AlgorithmId id) {
    Runner run(id, space, dict, f, m_max, sch, opt);
    const PerturbSpec* perturb = opt.perturb ? &*opt.perturb : nullptr;
    std::optional<RngStream> noise;
    if (perturb) {
        noise.emplace(RngStream::derive(perturb->noise_seed, "awbga_noise"));
        run.trace.seed = perturb->noise_seed;
    }

    std::vector<std::size_t> selected; // span atom indices in selection order
    std::vector<Element> span;

    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double t = weakness_at(sch, m);
        DualFunctional F = norming_functional(space, run.residual);
        double nr = run.trace.records.back().residual_norm;

        double delta_m = 0.0, eta_m = 0.0;
        if (perturb) {
            if (perturb->mode == PerturbMode::ResidualScaled) {
                double qd = smoothness_params(space).dual();
                double scale = perturb->coeff * std::pow(t, qd) *
                               std::min(1.0, std::pow(nr, qd));
                delta_m = eta_m = scale;
            } else {
                delta_m = perturb->delta.value(m);
                eta_m = perturb->eta.value(m);
            }
        }

        // (S2) perturbed functional: ||F_m|| <= 1 and F_m(f_m) >= (1-delta)||f_m||
        if (perturb) {
            double delta = delta_m;
            if (delta > 0.0) {
                double scale = delta;
                for (int attempt = 0; attempt < 60; ++attempt) {
                    Vec nu(space.dim);
                    for (double& x : nu) x = noise->normal();
                    double dn_nu = dual_norm(space, nu);
                    if (dn_nu == 0.0) continue;
                    Vec cand = F.coords;
                    for (std::size_t i = 0; i < cand.size(); ++i)
                        cand[i] += scale * nu[i] / dn_nu;
                    double dual = dual_norm(space, cand);
                    for (double& x : cand) x /= dual;
                    double val = dot(cand, run.residual);
                    if (val >= (1.0 - delta) * nr) {
                        F.coords = cand;
                        break;
                    }
                    scale *= 0.5;
                }
            }
        }

        DNormResult dn = d_norm(F, dict);
        if (dn.value <= opt.zero_tol) {
            run.trace.stop = StopReason::ZeroFunctional;
            break;
        }
        auto sel = select_weak(F, dict, t, TieRule::LowestIndex,
                               run.realization ? &*run.realization : nullptr);

        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.dnorm_f = dn.value;
        double eta = eta_m;

        if (kind == WbgaKind::Chebyshev) {
            bool duplicate =
                std::find(selected.begin(), selected.end(), sel->index) != selected.end();
            if (duplicate) {
                rec.duplicate_dropped = true;
            } else {
                selected.push_back(sel->index);
                span.push_back(dict.element(sel->index));
            }
            auto proj = chebyshev_project(space, f, span, opt.solver);
            if (!proj.converged) {
                run.trace.stop = StopReason::StepFailure;
                rec.residual_norm = proj.residual_norm;
                run.push(rec);
                break;
            }
            rec.dependent_dropped = proj.dropped_any;
            rec.reference_objective = proj.residual_norm;
            Element g_real(space.dim, 0.0);
            for (std::size_t j = 0; j < span.size(); ++j)
                add_scaled_inplace(g_real, proj.coefficients[j], span[j]);
            Vec coeff_real = proj.coefficients;
            if (eta > 0.0 && proj.residual_norm > opt.zero_tol) {
                Vec dcoef(span.size());
                for (double& x : dcoef) x = noise->normal();
                Element dir(space.dim, 0.0);
                for (std::size_t j = 0; j < span.size(); ++j)
                    add_scaled_inplace(dir, dcoef[j], span[j]);
                double nd = norm(space, dir);
                if (nd > 0.0) {
                    dir = scaled(dir, 1.0 / nd);
                    double target = (1.0 + 0.5 * eta) * proj.residual_norm;
                    double s = inflate_to_target(space, f, g_real, dir, target);
                    add_scaled_inplace(g_real, s, dir);
                    for (std::size_t j = 0; j < span.size(); ++j)
                        coeff_real[j] += s * dcoef[j] / nd;
                }
            }
            run.approx = g_real;
            std::fill(run.coeffs.begin(), run.coeffs.end(), 0.0);
            for (std::size_t j = 0; j < span.size(); ++j)
                run.coeffs[selected[j]] += coeff_real[j];
        } else if (kind == WbgaKind::FreeRelax) {
            Element phi = run.signed_atom(*sel);
            auto fr = free_relax(space, f, run.approx, phi, opt.solver);
            rec.reference_objective = fr.residual_norm;
            rec.w = fr.w;
            rec.lambda = fr.lambda;
            Element g_real = fr.approximant;
            double scale_prev = 1.0 - fr.w, add_new = fr.lambda;
            if (eta > 0.0 && fr.residual_norm > opt.zero_tol && norm2(run.approx) > 0.0) {
                // perturb inside the same two-parameter family
                double dw = noise->normal(), dl = noise->normal();
                Element dir = add_scaled(scaled(run.approx, -dw), dl, phi);
                double ndir = norm(space, dir);
                if (ndir > 0.0) {
                    double target = (1.0 + 0.5 * eta) * fr.residual_norm;
                    double s = inflate_to_target(space, f, g_real, scaled(dir, 1.0 / ndir),
                                                 target) / ndir;
                    g_real = add_scaled(g_real, s, dir);
                    scale_prev -= s * dw;
                    add_new += s * dl;
                }
            }
            double prev_factor = scale_prev;
            Element new_approx = g_real;
            for (double& c : run.coeffs) c *= prev_factor;
            run.coeffs[sel->index] += sel->sign * add_new;
            run.approx = new_approx;
        } else { // Rescaled
            Element phi = run.signed_atom(*sel);
            auto ls = line_search_1d(space, run.residual, phi, opt.solver);
            double lambda = std::max(0.0, ls.lambda);
            double obj_lambda = (lambda == ls.lambda)
                                    ? ls.residual_norm
                                    : norm(space, add_scaled(run.residual, -lambda, phi));
            rec.reference_objective = obj_lambda;
            if (eta > 0.0 && obj_lambda > opt.zero_tol) {
                double target = (1.0 + 0.5 * eta) * obj_lambda;
                double s = inflate_to_target(space, run.residual,
                                             scaled(phi, lambda), phi, target);
                lambda += s;
            }
            Element dir2 = add_scaled(run.approx, lambda, phi);
            if (norm(space, dir2) <= opt.zero_tol) {
                run.trace.stop = StopReason::NoCandidate;
                rec.residual_norm = run.trace.records.back().residual_norm;
                run.push(rec);
                break;
            }
            auto ls2 = line_search_1d(space, f, dir2, opt.solver);
            double mu = ls2.lambda;
            // the recorded objective pair describes the final (mu) solve so it
            // matches the realized residual
            rec.reference_objective = ls2.residual_norm;
            if (eta > 0.0 && ls2.residual_norm > opt.zero_tol) {
                double target = (1.0 + 0.5 * eta) * ls2.residual_norm;
                double s = inflate_to_target(space, f, scaled(dir2, mu), dir2, target);
                mu += s;
                if (mu < 0.0) mu = 0.0;
            }
            rec.lambda = lambda;
            rec.mu = mu;
            run.approx = scaled(dir2, mu);
            for (double& c : run.coeffs) c *= mu;
            run.coeffs[sel->index] += mu * lambda * sel->sign;
        }

        run.residual = add_scaled(f, -1.0, run.approx);
        rec.residual_norm = norm(space, run.residual);
        rec.realized_objective = rec.residual_norm;
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// X-greedy with free relaxation
// ---------------------------------------------------------------------------

Trace run_xgafr_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                     std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                     bool joint) {
    Runner run(joint ? AlgorithmId::XGAFR1 : AlgorithmId::XGAFR2, space, dict, f, m_max, sch,
               opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        TraceRecord rec;
        rec.dnorm_f = d_norm(norming_functional(space, run.residual), dict).value;
        std::size_t index = 0;
        FreeRelaxResult best;
        if (joint) {
            best.residual_norm = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < dict.size(); ++i) {
                auto fr = free_relax(space, f, run.approx, dict.element(i), opt.solver);
                if (fr.residual_norm < best.residual_norm) {
                    best = fr;
                    index = i;
                }
            }
        } else {
            auto xg = x_greedy_select(space, run.residual, dict, opt.solver);
            index = xg.index;
            best = free_relax(space, f, run.approx, dict.element(index), opt.solver);
        }
        for (double& c : run.coeffs) c *= (1.0 - best.w);
        run.coeffs[index] += best.lambda;
        run.approx = best.approximant;
        run.residual = best.residual;
        rec.selected_index = long(index);
        rec.sign = best.lambda >= 0.0 ? 1 : -1;
        rec.w = best.w;
        rec.lambda = best.lambda;
        rec.residual_norm = best.residual_norm;
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// thresholding with relaxation / projection: DGART, CGAT
// ---------------------------------------------------------------------------

Trace run_threshold_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                         std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                         bool chebyshev) {
    double delta = opt.threshold_delta;
    if (!(delta > 0.0) || delta > 0.5)
        throw std::invalid_argument("threshold delta must lie in (0, 1/2]");
    Runner run(chebyshev ? AlgorithmId::CGAT : AlgorithmId::DGART, space, dict, f, m_max, sch,
               opt);
    double nf = run.trace.records.front().residual_norm;
    std::vector<std::size_t> selected;
    std::vector<Element> span;
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        DualFunctional F = norming_functional(space, run.residual);
        auto sel = threshold_select(F, dict, delta);
        if (!sel) {
            run.trace.stop = StopReason::ThresholdEmpty;
            break;
        }
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.dnorm_f = d_norm(F, dict).value;
        if (chebyshev) {
            if (std::find(selected.begin(), selected.end(), sel->index) != selected.end()) {
                rec.duplicate_dropped = true;
            } else {
                selected.push_back(sel->index);
                span.push_back(dict.element(sel->index));
            }
            auto proj = chebyshev_project(space, f, span, opt.solver);
            rec.dependent_dropped = proj.dropped_any;
            std::fill(run.coeffs.begin(), run.coeffs.end(), 0.0);
            run.approx.assign(space.dim, 0.0);
            for (std::size_t j = 0; j < span.size(); ++j) {
                run.coeffs[selected[j]] += proj.coefficients[j];
                add_scaled_inplace(run.approx, proj.coefficients[j], span[j]);
            }
            run.residual = proj.residual;
            rec.residual_norm = proj.residual_norm;
        } else {
            Element phi = run.signed_atom(*sel);
            auto fr = free_relax(space, f, run.approx, phi, opt.solver);
            for (double& c : run.coeffs) c *= (1.0 - fr.w);
            run.coeffs[sel->index] += sel->sign * fr.lambda;
            run.approx = fr.approximant;
            run.residual = fr.residual;
            rec.w = fr.w;
            rec.lambda = fr.lambda;
            rec.residual_norm = fr.residual_norm;
        }
        run.push(rec);
        if (rec.residual_norm <= delta * nf) {
            run.trace.stop = StopReason::ResidualBelowDeltaF;
            break;
        }
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// incremental algorithm
// ---------------------------------------------------------------------------

Trace run_ia_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                  std::size_t m_max, const Schedules& sch, const RunOptions& opt) {
    Runner run(AlgorithmId::IA_EPS, space, dict, f, m_max, sch, opt);
    Schedule eps_schedule = sch.incremental;
    if (eps_schedule.kind() == Schedule::Kind::Constant &&
        eps_schedule.constant_value() == 0.0) {
        // canonical schedule eps_n = gamma^{1/q} n^{-1/q'}
        SmoothnessParams sp = smoothness_params(space);
        eps_schedule = Schedule::power(std::pow(sp.gamma, 1.0 / sp.q), 1.0 / sp.dual());
    }
    // counts per signed atom: the approximant is their average
    std::vector<long> count_pos(dict.size(), 0), count_neg(dict.size(), 0);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double eps = eps_schedule.value(m);
        if (!(eps > 0.0)) throw std::invalid_argument("incremental schedule must be positive");
        DualFunctional F = norming_functional(space, run.residual);
        double ff = F(f);
        // greedy realization: the maximizer of F over the generating set is
        // always admissible for data in its convex hull (the lazy lowest-index
        // realization converges too slowly to audit at desk scale)
        std::optional<Selection> sel;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dict.size(); ++i) {
            double v = F(dict.element(i));
            if (v > best) {
                best = v;
                sel = Selection{i, 1};
            }
            if (opt.ia_symmetrized && -v > best) {
                best = -v;
                sel = Selection{i, -1};
            }
        }
        if (!sel || best - ff < -eps) {
            // outside the guaranteed class the slack test can fail
            run.trace.stop = StopReason::NoCandidate;
            break;
        }
        (sel->sign > 0 ? count_pos : count_neg)[sel->index] += 1;
        // recompute the average exactly from counts (no drift)
        run.approx.assign(space.dim, 0.0);
        std::fill(run.coeffs.begin(), run.coeffs.end(), 0.0);
        for (std::size_t i = 0; i < dict.size(); ++i) {
            long net = count_pos[i] - count_neg[i];
            if (net == 0 && count_pos[i] == 0) continue;
            double w = double(net) / double(m);
            run.coeffs[i] = w;
            if (w != 0.0) add_scaled_inplace(run.approx, w, dict.element(i));
        }
        run.residual = add_scaled(f, -1.0, run.approx);
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.c = 1.0 / double(m);
        rec.residual_norm = norm(space, run.residual);
        rec.dnorm_f = d_norm(F, dict).value;
        run.push(rec);
        long total = 0;
        for (std::size_t i = 0; i < dict.size(); ++i) total += count_pos[i] + count_neg[i];
        run.trace.records.back().approx_l1_mass = double(total) / double(m);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// WRGA: convex-combination relaxation
// ---------------------------------------------------------------------------

Trace run_wrga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt) {
    Runner run(AlgorithmId::WRGA, space, dict, f, m_max, sch, opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double t = weakness_at(sch, m);
        DualFunctional F = norming_functional(space, run.residual);
        DNormResult dn = d_norm(F, dict);
        double base = F(run.approx);
        double sup = dn.value - base; // sup over D^{+-} of F(g - G_{m-1})
        std::optional<Selection> sel;
        if (sup > 0.0) {
            double threshold = t * sup;
            for (std::size_t i = 0; i < dict.size() && !sel; ++i) {
                double v = F(dict.element(i));
                if (v - base >= threshold)
                    sel = Selection{i, 1};
                else if (-v - base >= threshold)
                    sel = Selection{i, -1};
            }
        }
        if (!sel) sel = Selection{dn.index, dn.sign};
        Element phi = run.signed_atom(*sel);
        Element dir = add_scaled(phi, -1.0, run.approx);
        if (norm(space, dir) <= opt.zero_tol) {
            run.trace.stop = StopReason::NoCandidate;
            break;
        }
        auto ls = line_search_interval(space, run.residual, dir, 0.0, 1.0, opt.solver);
        for (double& c : run.coeffs) c *= (1.0 - ls.lambda);
        run.coeffs[sel->index] += sel->sign * ls.lambda;
        run.approx = add_scaled(scaled(run.approx, 1.0 - ls.lambda), ls.lambda, phi);
        run.residual = add_scaled(f, -1.0, run.approx);
        TraceRecord rec;
        rec.selected_index = long(sel->index);
        rec.sign = sel->sign;
        rec.lambda = ls.lambda;
        rec.residual_norm = norm(space, run.residual);
        rec.dnorm_f = dn.value;
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// rescaled relaxed X-greedy
// ---------------------------------------------------------------------------

Trace run_rrxga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                     std::size_t m_max, const Schedules& sch, const RunOptions& opt) {
    Runner run(AlgorithmId::RRXGA, space, dict, f, m_max, sch, opt);
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        auto xg = x_greedy_select(space, run.residual, dict, opt.solver);
        int sign = xg.lambda >= 0.0 ? 1 : -1;
        double lambda = std::abs(xg.lambda);
        Element phi = sign > 0 ? dict.element(xg.index) : scaled(dict.element(xg.index), -1.0);
        Element dir = add_scaled(run.approx, lambda, phi);
        TraceRecord rec;
        rec.selected_index = long(xg.index);
        rec.sign = sign;
        rec.lambda = lambda;
        rec.dnorm_f = d_norm(norming_functional(space, run.residual), dict).value;
        if (norm(space, dir) <= opt.zero_tol) {
            run.trace.stop = StopReason::NoCandidate;
            rec.residual_norm = run.trace.records.back().residual_norm;
            run.push(rec);
            break;
        }
        auto ls2 = line_search_1d(space, f, dir, opt.solver);
        rec.mu = ls2.lambda;
        run.approx = scaled(dir, ls2.lambda);
        for (double& c : run.coeffs) c *= ls2.lambda;
        run.coeffs[xg.index] += ls2.lambda * lambda * sign;
        run.residual = add_scaled(f, -1.0, run.approx);
        rec.residual_norm = norm(space, run.residual);
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// quasi-orthogonal greedy
// ---------------------------------------------------------------------------

Trace run_qoga_impl(const SpaceLp& space, const Dictionary& dict, const Element& f,
                    std::size_t m_max, const Schedules& sch, const RunOptions& opt,
                    AlgorithmId id) {
    Runner run(id, space, dict, f, m_max, sch, opt);
    std::vector<std::size_t> selected;
    for (std::size_t m = 1; m <= m_max && run.pre_iteration(); ++m) {
        double t = weakness_at(sch, m);
        // selection by the atoms' norming functionals applied to the residual
        double best = 0.0;
        std::vector<double> vals(dict.size());
        for (std::size_t i = 0; i < dict.size(); ++i) {
            vals[i] = dot(dict.atom_functional(i), run.residual);
            best = std::max(best, std::abs(vals[i]));
        }
        if (best <= opt.zero_tol) {
            run.trace.stop = StopReason::ZeroFunctional;
            break;
        }
        std::size_t pick = 0;
        for (std::size_t i = 0; i < dict.size(); ++i)
            if (std::abs(vals[i]) >= t * best) {
                pick = i;
                break;
            }
        selected.push_back(pick);
        // interpolation system F_{phi_j}(f - sum c_l phi_l) = 0
        const std::size_t k = selected.size();
        Mat a(k, k);
        Vec rhs(k);
        for (std::size_t j = 0; j < k; ++j) {
            const Vec& fj = dict.atom_functional(selected[j]);
            for (std::size_t l = 0; l < k; ++l) a(j, l) = dot(fj, dict.element(selected[l]));
            rhs[j] = dot(fj, f);
        }
        auto sol = lu_solve(a, rhs, 1e-12);
        TraceRecord rec;
        rec.selected_index = long(pick);
        rec.sign = vals[pick] >= 0.0 ? 1 : -1;
        rec.dnorm_f = best;
        if (!sol) {
            run.trace.stop = StopReason::SingularSystem;
            rec.residual_norm = run.trace.records.back().residual_norm;
            run.push(rec);
            break;
        }
        std::fill(run.coeffs.begin(), run.coeffs.end(), 0.0);
        run.approx.assign(space.dim, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            run.coeffs[selected[l]] += (*sol)[l];
            add_scaled_inplace(run.approx, (*sol)[l], dict.element(selected[l]));
        }
        run.residual = add_scaled(f, -1.0, run.approx);
        rec.c = (*sol)[k - 1];
        rec.residual_norm = norm(space, run.residual);
        run.push(rec);
    }
    return run.finish();
}

// ---------------------------------------------------------------------------
// thresholding greedy algorithm over a basis
// ---------------------------------------------------------------------------

Trace run_tga_impl(const SpaceLp& space, const Dictionary& basis, const Element& f,
                   std::size_t m_max, const RunOptions& opt) {
    if (basis.size() != space.dim)
        throw std::invalid_argument("tga: dictionary must be a basis (N == dim)");
    Mat y(space.dim, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < space.dim; ++i) y(i, j) = basis.element(j)[i];
    auto expansion = lu_solve(y, f, 1e-12);
    if (!expansion) throw std::invalid_argument("tga: dictionary is not a basis (singular)");

    Schedules none;
    Runner run(AlgorithmId::TGA, space, basis, f, m_max, none, opt);
    std::vector<std::size_t> order(basis.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        double va = std::abs((*expansion)[a]), vb = std::abs((*expansion)[b]);
        if (va != vb) return va > vb;
        return a < b;
    });
    std::size_t limit = std::min(m_max, basis.size());
    for (std::size_t m = 1; m <= limit && run.pre_iteration(); ++m) {
        std::size_t idx = order[m - 1];
        double c = (*expansion)[idx];
        run.coeffs[idx] = c;
        add_scaled_inplace(run.approx, c, basis.element(idx));
        run.residual = add_scaled(f, -1.0, run.approx);
        TraceRecord rec;
        rec.selected_index = long(idx);
        rec.sign = c >= 0.0 ? 1 : -1;
        rec.c = c;
        rec.residual_norm = norm(space, run.residual);
        run.push(rec);
    }
    return run.finish();
}

} // namespace

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

Trace run_algorithm(AlgorithmId id, const SpaceLp& space, const Dictionary& dict,
                    const Element& f, std::size_t m_max, const Schedules& sch,
                    const RunOptions& opt) {
    switch (id) {
        case AlgorithmId::PGA:
        case AlgorithmId::WGA:
        case AlgorithmId::WDGA:
            return run_wdga_impl(space, dict, f, m_max, sch, opt, id);
        case AlgorithmId::WCGA:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::Chebyshev, id);
        case AlgorithmId::WGAFR:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::FreeRelax, id);
        case AlgorithmId::RWRGA:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::Rescaled, id);
        case AlgorithmId::AWCGA:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::Chebyshev, id);
        case AlgorithmId::AWGAFR:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::FreeRelax, id);
        case AlgorithmId::ARWRGA:
            return run_wbga_impl(space, dict, f, m_max, sch, opt, WbgaKind::Rescaled, id);
        case AlgorithmId::XGAFR1:
            return run_xgafr_impl(space, dict, f, m_max, sch, opt, true);
        case AlgorithmId::XGAFR2:
            return run_xgafr_impl(space, dict, f, m_max, sch, opt, false);
        case AlgorithmId::GAWR:
            return run_gawr_impl(space, dict, f, m_max, sch, opt, false);
        case AlgorithmId::XGAR:
            return run_gawr_impl(space, dict, f, m_max, sch, opt, true);
        case AlgorithmId::XGA_C:
            return run_coeff_impl(space, dict, f, m_max, sch, opt, false);
        case AlgorithmId::DGA_C:
            return run_coeff_impl(space, dict, f, m_max, sch, opt, true);
        case AlgorithmId::DGA_BMU:
            return run_dga_bmu_impl(space, dict, f, m_max, sch, opt);
        case AlgorithmId::MDGA:
            return run_mdga_impl(space, dict, f, m_max, sch, opt);
        case AlgorithmId::DGART:
            return run_threshold_impl(space, dict, f, m_max, sch, opt, false);
        case AlgorithmId::CGAT:
            return run_threshold_impl(space, dict, f, m_max, sch, opt, true);
        case AlgorithmId::IA_EPS:
            return run_ia_impl(space, dict, f, m_max, sch, opt);
        case AlgorithmId::WRGA:
            return run_wrga_impl(space, dict, f, m_max, sch, opt);
        case AlgorithmId::RRXGA:
            return run_rrxga_impl(space, dict, f, m_max, sch, opt);
        case AlgorithmId::QOGA:
        case AlgorithmId::WQOGA:
            return run_qoga_impl(space, dict, f, m_max, sch, opt, id);
        case AlgorithmId::TGA:
            return run_tga_impl(space, dict, f, m_max, opt);
    }
    throw std::logic_error("run_algorithm: unhandled id");
}

#define GREEDY_DEFINE_RUN(fn, id)                                                             \
    Trace fn(const SpaceLp& s, const Dictionary& d, const Element& f, std::size_t m,          \
             const Schedules& sc, const RunOptions& o) {                                      \
        return run_algorithm(AlgorithmId::id, s, d, f, m, sc, o);                             \
    }

GREEDY_DEFINE_RUN(run_wdga, WDGA)
GREEDY_DEFINE_RUN(run_wcga, WCGA)
GREEDY_DEFINE_RUN(run_wgafr, WGAFR)
GREEDY_DEFINE_RUN(run_xgafr1, XGAFR1)
GREEDY_DEFINE_RUN(run_xgafr2, XGAFR2)
GREEDY_DEFINE_RUN(run_gawr, GAWR)
GREEDY_DEFINE_RUN(run_xgar, XGAR)
GREEDY_DEFINE_RUN(run_xga_c, XGA_C)
GREEDY_DEFINE_RUN(run_dga_c, DGA_C)
GREEDY_DEFINE_RUN(run_dga_bmu, DGA_BMU)
GREEDY_DEFINE_RUN(run_mdga, MDGA)
GREEDY_DEFINE_RUN(run_dgart, DGART)
GREEDY_DEFINE_RUN(run_cgat, CGAT)
GREEDY_DEFINE_RUN(run_ia_eps, IA_EPS)
GREEDY_DEFINE_RUN(run_wrga, WRGA)
GREEDY_DEFINE_RUN(run_rwrga, RWRGA)
GREEDY_DEFINE_RUN(run_rrxga, RRXGA)
GREEDY_DEFINE_RUN(run_qoga, QOGA)
#undef GREEDY_DEFINE_RUN

Trace run_tga(const SpaceLp& s, const Dictionary& basis, const Element& f, std::size_t m,
              const RunOptions& o) {
    Schedules none;
    return run_algorithm(AlgorithmId::TGA, s, basis, f, m, none, o);
}

Trace wrap_approximate(AlgorithmId inner, const SpaceLp& space, const Dictionary& dict,
                       const Element& f, std::size_t m_max, const Schedules& sch,
                       const PerturbSpec& perturb, const RunOptions& opt) {
    AlgorithmId outer;
    switch (inner) {
        case AlgorithmId::WCGA: outer = AlgorithmId::AWCGA; break;
        case AlgorithmId::WGAFR: outer = AlgorithmId::AWGAFR; break;
        case AlgorithmId::RWRGA: outer = AlgorithmId::ARWRGA; break;
        default:
            throw std::invalid_argument("wrap_approximate: inner must be WCGA/WGAFR/RWRGA");
    }
    RunOptions o = opt;
    o.perturb = perturb;
    return run_algorithm(outer, space, dict, f, m_max, sch, o);
}

Trace run_with_noise(AlgorithmId inner, const SpaceLp& space, const Dictionary& dict,
                     const Element& f_clean, const Element& noise, std::size_t m_max,
                     const Schedules& sch, const RunOptions& opt) {
    if (noise.size() != space.dim) throw std::invalid_argument("run_with_noise: dim mismatch");
    Element f = add_scaled(f_clean, 1.0, noise);
    return run_algorithm(inner, space, dict, f, m_max, sch, opt);
}

} // namespace greedy
