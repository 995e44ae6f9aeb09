#include "greedy/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace greedy {

Schedule Schedule::constant(double v) {
    Schedule s;
    s.kind_ = Kind::Constant;
    s.constant_ = v;
    return s;
}

Schedule Schedule::sequence(std::vector<double> values, double tail) {
    Schedule s;
    s.kind_ = Kind::Sequence;
    s.values_ = std::move(values);
    s.tail_ = tail;
    return s;
}

Schedule Schedule::relaxation_k2() {
    Schedule s;
    s.kind_ = Kind::Formula;
    s.formula_ = Formula::RelaxationTwoOverKPlus2;
    return s;
}

Schedule Schedule::power(double scale, double exponent) {
    Schedule s;
    s.kind_ = Kind::Formula;
    s.formula_ = Formula::PowerDecay;
    s.scale_ = scale;
    s.exponent_ = exponent;
    return s;
}

Schedule Schedule::log_decay(double scale) {
    Schedule s;
    s.kind_ = Kind::Formula;
    s.formula_ = Formula::LogDecay;
    s.scale_ = scale;
    return s;
}

Schedule Schedule::zero() {
    return constant(0.0);
}

double Schedule::value(std::size_t k) const {
    if (k < 1) throw std::invalid_argument("Schedule::value: 1-based index");
    switch (kind_) {
        case Kind::Constant:
            return constant_;
        case Kind::Sequence:
            return k <= values_.size() ? values_[k - 1] : tail_;
        case Kind::Formula:
            switch (formula_) {
                case Formula::RelaxationTwoOverKPlus2:
                    return 2.0 / double(k + 2);
                case Formula::PowerDecay:
                    return scale_ * std::pow(double(k), -exponent_);
                case Formula::LogDecay:
                    return scale_ / std::log(double(k) + 2.0);
                case Formula::None:
                    break;
            }
            break;
    }
    throw std::logic_error("Schedule::value: malformed schedule");
}

std::string Schedule::describe() const {
    char buf[96];
    switch (kind_) {
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "const=%.17g", constant_);
            return buf;
        case Kind::Sequence:
            std::snprintf(buf, sizeof buf, "seq[%zu],tail=%.17g", values_.size(), tail_);
            return buf;
        case Kind::Formula:
            switch (formula_) {
                case Formula::RelaxationTwoOverKPlus2:
                    return "2/(k+2)";
                case Formula::PowerDecay:
                    std::snprintf(buf, sizeof buf, "%.17g*k^-%.17g", scale_, exponent_);
                    return buf;
                case Formula::LogDecay:
                    std::snprintf(buf, sizeof buf, "%.17g/log(k+2)", scale_);
                    return buf;
                case Formula::None:
                    break;
            }
    }
    return "invalid";
}

} // namespace greedy
