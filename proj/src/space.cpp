#include "greedy/space.hpp"

#include <cmath>
#include <stdexcept>

namespace greedy {

SpaceLp::SpaceLp(std::size_t dim_, double p_) : dim(dim_), p(p_) {
    if (dim < 1) throw std::invalid_argument("SpaceLp: dim must be >= 1");
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("SpaceLp: requires 1 < p < infinity");
}

double norm(const SpaceLp& space, const Element& x) {
    if (x.size() != space.dim) throw std::invalid_argument("norm: dimension mismatch");
    if (space.p == 2.0) return norm2(x);
    double s = 0.0;
    for (double xi : x) s += std::pow(std::abs(xi), space.p);
    return std::pow(s, 1.0 / space.p);
}

DualFunctional norming_functional(const SpaceLp& space, const Element& f) {
    double nf = norm(space, f);
    if (nf == 0.0) throw std::invalid_argument("norming_functional: zero vector");
    DualFunctional out;
    out.coords.resize(f.size());
    if (space.p == 2.0) {
        for (std::size_t i = 0; i < f.size(); ++i) out.coords[i] = f[i] / nf;
        return out;
    }
    double scale = std::pow(nf, space.p - 1.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double a = std::abs(f[i]);
        out.coords[i] = (f[i] >= 0.0 ? 1.0 : -1.0) * std::pow(a, space.p - 1.0) / scale;
        if (a == 0.0) out.coords[i] = 0.0;
    }
    return out;
}

double dual_norm(const SpaceLp& space, const Vec& coords) {
    double pd = space.dual_exponent();
    if (pd == 2.0) return norm2(coords);
    double s = 0.0;
    for (double c : coords) s += std::pow(std::abs(c), pd);
    return std::pow(s, 1.0 / pd);
}

SmoothnessParams smoothness_params(const SpaceLp& space) {
    if (space.p >= 2.0) return {(space.p - 1.0) / 2.0, 2.0};
    return {1.0 / space.p, space.p};
}

double xi_solve(const SmoothnessParams& params, double t, double theta) {
    if (!(params.gamma > 0.0) || !(params.q > 1.0))
        throw std::invalid_argument("xi_solve: requires gamma > 0, q > 1");
    double u = std::pow(theta * t / params.gamma, 1.0 / (params.q - 1.0));
    return std::min(2.0, u);
}

std::pair<double, double> smoothness_inequality_check(const SpaceLp& space, const Element& x,
                                                      const Element& y, double u) {
    double nx = norm(space, x);
    if (nx == 0.0) throw std::invalid_argument("smoothness_inequality_check: zero x");
    DualFunctional fx = norming_functional(space, x);
    double lhs = norm(space, add_scaled(x, u, y)) - nx - u * fx(y);
    SmoothnessParams sp = smoothness_params(space);
    double v = std::abs(u) * norm(space, y) / nx;
    double rhs = 2.0 * nx * sp.gamma * std::pow(v, sp.q);
    return {lhs, rhs};
}

Element add_scaled(const Element& a, double c, const Element& b) {
    Element out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * b[i];
    return out;
}

Element scaled(const Element& a, double c) {
    Element out(a);
    for (double& x : out) x *= c;
    return out;
}

void add_scaled_inplace(Element& a, double c, const Element& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += c * b[i];
}

} // namespace greedy
