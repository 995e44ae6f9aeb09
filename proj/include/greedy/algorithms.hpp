#pragma once

#include <optional>

#include "greedy/dictionary.hpp"
#include "greedy/schedule.hpp"
#include "greedy/steps.hpp"
#include "greedy/trace.hpp"

namespace greedy {

// Controlled errors for the approximate variants (AWCGA/AWGAFR/ARWRGA).
// delta perturbs the norming functional subject to (||F|| <= 1 and
// F(f_m) >= (1-delta_m)||f_m||); eta loosens each approximation step to
// within a (1+eta_m) factor of the exact solve. Both solves are executed
// and recorded in the trace.
enum class PerturbMode {
    Schedule,       // delta_m, eta_m read off the schedules
    ResidualScaled  // delta_m = eta_m = coeff * t_m^{q'} * min(1, ||f_{m-1}||^{q'})
};

struct PerturbSpec {
    PerturbMode mode = PerturbMode::Schedule;
    Schedule delta = Schedule::zero();
    Schedule eta = Schedule::zero();
    double coeff = 0.1;
    std::uint64_t noise_seed = 0;
};

struct RunOptions {
    double zero_tol = 1e-12;       // stop when ||f_m|| falls below
    SolverOptions solver;
    double threshold_delta = 0.1;  // DGART / CGAT
    double b = 0.5;                // DGA(t,b,mu) / MDGA shrinkage parameter
    bool ia_symmetrized = true;    // IA over D^{+-} (A_1 data) vs D (conv data)
    std::optional<std::uint64_t> realization_seed; // randomized weak selection
    std::optional<PerturbSpec> perturb;            // approximate variants only
};

// Uniform entry point. All runs share: record 0 holds ||f||; early stop on
// zero residual or zero selection functional; per-iteration records carry the
// selected atom, step coefficients, residual norm and the D-norm seen by the
// greedy step.
Trace run_algorithm(AlgorithmId id, const SpaceLp& space, const Dictionary& dict,
                    const Element& f, std::size_t m_max, const Schedules& schedules,
                    const RunOptions& options = {});

// Named wrappers for the individual procedures.
Trace run_wdga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_wcga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_wgafr(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_xgafr1(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                 const Schedules&, const RunOptions& = {});
Trace run_xgafr2(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                 const Schedules&, const RunOptions& = {});
Trace run_gawr(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_xgar(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_xga_c(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_dga_c(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_dga_bmu(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                  const Schedules&, const RunOptions& = {});
Trace run_mdga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_dgart(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_cgat(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_ia_eps(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                 const Schedules&, const RunOptions& = {});
Trace run_wrga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_rwrga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_rrxga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
                const Schedules&, const RunOptions& = {});
Trace run_qoga(const SpaceLp&, const Dictionary&, const Element& f, std::size_t m_max,
               const Schedules&, const RunOptions& = {});
Trace run_tga(const SpaceLp&, const Dictionary& basis, const Element& f, std::size_t m_max,
              const RunOptions& = {});

// Approximate wrapper: AWCGA / AWGAFR / ARWRGA over the matching inner
// algorithm; with zero perturbations the trace equals the inner trace.
Trace wrap_approximate(AlgorithmId inner, const SpaceLp&, const Dictionary&, const Element& f,
                       std::size_t m_max, const Schedules&, const PerturbSpec&,
                       const RunOptions& = {});

// Runs `inner` on f = f_eps + noise (noisy-data study, ||noise|| <= eps).
Trace run_with_noise(AlgorithmId inner, const SpaceLp&, const Dictionary&,
                     const Element& f_clean, const Element& noise, std::size_t m_max,
                     const Schedules&, const RunOptions& = {});

} // namespace greedy
