#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "greedy/space.hpp"

namespace greedy {

enum class AlgorithmId {
    PGA,
    WGA,
    WDGA,
    WCGA,
    WGAFR,
    XGAFR1,
    XGAFR2,
    GAWR,
    XGAR,
    XGA_C,
    DGA_C,
    DGA_BMU,
    MDGA,
    DGART,
    CGAT,
    IA_EPS,
    WRGA,
    RWRGA,
    RRXGA,
    QOGA,
    WQOGA,
    TGA,
    AWCGA,
    AWGAFR,
    ARWRGA
};

std::string algorithm_name(AlgorithmId id);
AlgorithmId algorithm_from_name(const std::string& name);
// True for algorithms whose residual norms are non-increasing by construction.
bool algorithm_monotone(AlgorithmId id);

enum class StopReason {
    None,           // still running / reached m_max
    MaxIterations,
    ZeroResidual,
    ZeroFunctional,
    ThresholdEmpty,
    ResidualBelowDeltaF,
    SingularSystem,
    StepFailure,
    NoCandidate // incremental step found no admissible element
};
std::string stop_reason_name(StopReason r);

constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();

struct ApproxTerm {
    std::size_t index;
    double coefficient; // signed
};

struct TraceRecord {
    std::size_t m = 0;
    long selected_index = -1; // -1 when no selection happened (record 0)
    int sign = 0;
    double lambda = kNoValue;
    double w = kNoValue;
    double mu = kNoValue;
    double c = kNoValue;
    double residual_norm = 0.0;
    double dnorm_f = kNoValue;     // ||F_{f_{m-1}}||_D seen by the greedy step
    bool duplicate_dropped = false;
    bool dependent_dropped = false;
    double reference_objective = kNoValue; // approximate variants: exact value
    double realized_objective = kNoValue;  // approximate variants: value used
    std::vector<ApproxTerm> approx;        // G_m snapshot, signed coefficients
    double approx_l1_mass = 0.0;
};

struct Trace {
    AlgorithmId algorithm = AlgorithmId::WDGA;
    std::size_t dim = 0;
    double p = 2.0;
    std::uint64_t dictionary_fingerprint = 0;
    std::uint64_t seed = 0;
    std::string schedule_note;
    std::vector<TraceRecord> records; // records[0] holds ||f_0||
    std::vector<ApproxTerm> final_approximant;
    StopReason stop = StopReason::None;

    double residual_at(std::size_t m) const { return records.at(m).residual_norm; }
    std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
    bool residuals_non_increasing(double tol = 1e-9) const;
};

} // namespace greedy
