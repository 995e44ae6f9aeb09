#pragma once

#include <string>
#include <vector>

namespace greedy {

// Per-iteration scalar schedule: weakness t_k, relaxation r_k, prescribed
// coefficients c_k, incremental eps_n, or perturbation magnitudes.
// Indexing is 1-based to match the iteration counter.
class Schedule {
public:
    enum class Kind { Constant, Sequence, Formula };
    enum class Formula {
        None,
        RelaxationTwoOverKPlus2, // r_k = 2/(k+2)
        PowerDecay,              // value = scale * k^{-exponent}
        LogDecay                 // value = scale / log(k + 2)
    };

    Schedule() : kind_(Kind::Constant), constant_(1.0) {}

    static Schedule constant(double v);
    static Schedule sequence(std::vector<double> values, double tail);
    static Schedule relaxation_k2();
    static Schedule power(double scale, double exponent);
    static Schedule log_decay(double scale);
    static Schedule zero();

    double value(std::size_t k) const; // k >= 1

    Kind kind() const { return kind_; }
    Formula formula() const { return formula_; }
    double constant_value() const { return constant_; }
    std::string describe() const;

private:
    Kind kind_;
    Formula formula_ = Formula::None;
    double constant_ = 0.0;
    double scale_ = 0.0;
    double exponent_ = 0.0;
    std::vector<double> values_;
    double tail_ = 0.0;
};

// The schedules a run may consume; unused entries are ignored.
struct Schedules {
    Schedule weakness = Schedule::constant(1.0); // tau, in (0,1]
    Schedule relaxation = Schedule::zero();      // r, in [0,1)
    Schedule coefficients = Schedule::zero();    // calligraphic C, > 0
    Schedule incremental = Schedule::zero();     // eps_n > 0
    Schedule delta = Schedule::zero();           // functional perturbation
    Schedule eta = Schedule::zero();             // approximation slack
};

} // namespace greedy
