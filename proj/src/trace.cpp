#include "greedy/trace.hpp"

#include <stdexcept>
#include <unordered_map>

namespace greedy {

namespace {

const std::unordered_map<std::string, AlgorithmId>& name_map() {
    static const std::unordered_map<std::string, AlgorithmId> m = {
        {"pga", AlgorithmId::PGA},       {"wga", AlgorithmId::WGA},
        {"wdga", AlgorithmId::WDGA},     {"wcga", AlgorithmId::WCGA},
        {"wgafr", AlgorithmId::WGAFR},   {"xgafr1", AlgorithmId::XGAFR1},
        {"xgafr2", AlgorithmId::XGAFR2}, {"gawr", AlgorithmId::GAWR},
        {"xgar", AlgorithmId::XGAR},     {"xga_c", AlgorithmId::XGA_C},
        {"dga_c", AlgorithmId::DGA_C},   {"dga_bmu", AlgorithmId::DGA_BMU},
        {"mdga", AlgorithmId::MDGA},     {"dgart", AlgorithmId::DGART},
        {"cgat", AlgorithmId::CGAT},     {"ia_eps", AlgorithmId::IA_EPS},
        {"wrga", AlgorithmId::WRGA},     {"rwrga", AlgorithmId::RWRGA},
        {"rrxga", AlgorithmId::RRXGA},   {"qoga", AlgorithmId::QOGA},
        {"wqoga", AlgorithmId::WQOGA},   {"tga", AlgorithmId::TGA},
        {"awcga", AlgorithmId::AWCGA},   {"awgafr", AlgorithmId::AWGAFR},
        {"arwrga", AlgorithmId::ARWRGA},
    };
    return m;
}

} // namespace

std::string algorithm_name(AlgorithmId id) {
    for (const auto& [name, aid] : name_map())
        if (aid == id) return name;
    return "unknown";
}

AlgorithmId algorithm_from_name(const std::string& name) {
    auto it = name_map().find(name);
    if (it == name_map().end())
        throw std::invalid_argument("unknown algorithm name: " + name);
    return it->second;
}

bool algorithm_monotone(AlgorithmId id) {
    // Monotone = a zero step is always feasible at the approximation stage.
    // Fixed relaxation (GAWR/XGAR with r > 0) and TGA do not have that
    // property: shrinking the previous approximant can move the residual up.
    switch (id) {
        case AlgorithmId::PGA:
        case AlgorithmId::WGA:
        case AlgorithmId::WDGA:
        case AlgorithmId::WCGA:
        case AlgorithmId::WGAFR:
        case AlgorithmId::XGAFR1:
        case AlgorithmId::XGAFR2:
        case AlgorithmId::WRGA:
        case AlgorithmId::RWRGA:
        case AlgorithmId::RRXGA:
        case AlgorithmId::DGART:
        case AlgorithmId::CGAT:
            return true;
        default:
            return false;
    }
}

std::string stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::None: return "none";
        case StopReason::MaxIterations: return "m_max";
        case StopReason::ZeroResidual: return "zero_residual";
        case StopReason::ZeroFunctional: return "zero_functional";
        case StopReason::ThresholdEmpty: return "threshold_empty";
        case StopReason::ResidualBelowDeltaF: return "residual_below_delta_f";
        case StopReason::SingularSystem: return "singular_system";
        case StopReason::StepFailure: return "step_failure";
        case StopReason::NoCandidate: return "no_candidate";
    }
    return "unknown";
}

bool Trace::residuals_non_increasing(double tol) const {
    for (std::size_t m = 1; m < records.size(); ++m)
        if (records[m].residual_norm > records[m - 1].residual_norm + tol) return false;
    return true;
}

} // namespace greedy
