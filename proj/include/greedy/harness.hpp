#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "greedy/algorithms.hpp"
#include "greedy/oracle.hpp"

namespace greedy {

struct DictionarySpec {
    std::string kind = "random_unit"; // canonical | random_unit | trig | haar |
                                      // equiangular | file
    std::size_t count = 32;           // random_unit atom count
    std::size_t frequencies = 4;      // trig
    std::size_t levels = 3;           // haar
    double mu = 0.1;                  // equiangular pairwise inner product
    std::string path;                 // file

    Dictionary build(const SpaceLp& space, std::uint64_t seed) const;
};

struct DataSpec {
    std::string kind = "a1_sample"; // a1_sample | sparse
    std::size_t sparsity = 8;
    double scale = 1.0;       // multiplies the A_1 sample (A(eps) in noise runs)
    double noise_eps = 0.0;   // adds a noise vector of this norm
    double coeff_lo = 0.5;    // sparse: |coefficients| range
    double coeff_hi = 1.5;
};

struct Experiment {
    std::string id = "exp";
    std::vector<AlgorithmId> algorithms{AlgorithmId::WCGA};
    std::size_t dim = 32;
    double p = 2.0;
    DictionarySpec dictionary;
    DataSpec data;
    Schedules schedules;
    std::size_t m_max = 128;
    std::size_t replications = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> bounds; // bound catalog ids
    double b = 0.5;                  // DGA(t,b,mu)/MDGA parameter
    double threshold_delta = 0.25;   // DGART/CGAT
};

struct CheckResult {
    std::string bound;
    std::string algorithm;
    bool hard = true;       // explicit constant => hard pass/fail
    double max_ratio = 0.0; // worst over replications and m
    long violations = 0;    // replication count with a hard violation
    bool growth_flag = false;
    bool pass = true;
};

struct ExponentFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    bool exact_recovery = false; // residuals hit zero inside the window
};

struct Report {
    std::string experiment_id;
    std::size_t replications = 0;
    std::vector<CheckResult> checks;
    std::map<std::string, std::vector<double>> fitted_exponents; // per algorithm
    std::map<std::string, double> scalars;                       // named summary values
    std::vector<std::string> notes;
    bool pass = true;

    std::string to_json() const;
};

// Closed-form bound catalog. `context` carries instance values some bounds
// need (eps, a_eps for ST1; t, b for the shrinkage family). Throws on
// unknown ids. `hard` reports whether the bound's constant is explicit.
struct BoundContext {
    double eps = 0.0;
    double a_eps = 1.0;
    double t = 1.0;
    double b = 0.5;
};
std::function<double(std::size_t)> make_bound(const std::string& id, const SpaceLp& space,
                                              const Schedules& schedules,
                                              const BoundContext& context, bool& hard);

// Runs the experiment's algorithms over seeded replications, evaluates every
// bound id, and fits log-log exponents over the trailing half window.
// The sink (optional) receives every finished trace with its replication
// index, e.g. for CSV emission.
using TraceSink = std::function<void(const Trace&, std::size_t rep)>;
Report rate_sweep(const Experiment& exp, const TraceSink& sink = {});

// Weakness-schedule contrast: divergent sum(t_k/k) vs convergent, terminal
// residuals at m_max on the same data.
Report convergence_probe(const Experiment& exp);

// Lebesgue-type study: sparse + noise data, structural constants, WCGA
// iteration counts against sigma_m and eps, exponential-phase fit.
Report lebesgue_experiment(const Experiment& exp);

// QOGA recovery phase table plus the D-seminorm Lebesgue constant check.
Report recovery_table(const Experiment& exp);

// Noisy-data and approximate-variant study (explicit ST1 constant; shrinking
// vs non-shrinking perturbation schedules).
Report noise_and_approx_study(const Experiment& exp);

ExponentFit fit_exponent(const Trace& trace, std::size_t window_lo, std::size_t window_hi);
ExponentFit fit_exponent_tail(const Trace& trace); // window = last half

// Named-stream rng for a replication of an experiment.
RngStream replication_stream(const Experiment& exp, std::size_t rep, const std::string& role);

// Generates the experiment's data element for one replication.
struct Instance {
    Element f;          // what the algorithm sees (signal + noise)
    Element f_clean;    // scaled A_1/sparse part
    double eps = 0.0;   // noise norm
    SparseRepresentation rep; // for sparse/a1 kinds
};
Instance make_instance(const Experiment& exp, const Dictionary& dict, std::size_t rep_index);

} // namespace greedy
