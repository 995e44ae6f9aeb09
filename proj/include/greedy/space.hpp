#pragma once

#include <utility>

#include "greedy/linalg.hpp"

namespace greedy {

// A point of the ambient space; plain coordinate vector.
using Element = Vec;

// Real l_p^n with 1 < p < infinity. p = 1 and p = infinity are excluded:
// their norming functionals are not unique and none of the implemented
// results apply there.
struct SpaceLp {
    std::size_t dim;
    double p;

    SpaceLp(std::size_t dim_, double p_);

    double dual_exponent() const { return p / (p - 1.0); }
};

// Power-type bound gamma * u^q on the modulus of smoothness.
struct SmoothnessParams {
    double gamma;
    double q;

    // dual exponent of q; the rate exponent in every bound of the form
    // (1 + sum t_k^{q'})^{-1/q'}
    double dual() const { return q / (q - 1.0); }
};

// A functional in the dual space; evaluation is the dot product.
struct DualFunctional {
    Vec coords;

    double operator()(const Element& x) const { return dot(coords, x); }
};

double norm(const SpaceLp& space, const Element& x);

// The unique peak functional F with F(f) = ||f||_p and ||F||_{p'} = 1.
// Throws on the zero vector.
DualFunctional norming_functional(const SpaceLp& space, const Element& f);

// Norm of a dual-space vector, i.e. the l_{p'} norm.
double dual_norm(const SpaceLp& space, const Vec& coords);

SmoothnessParams smoothness_params(const SpaceLp& space);

// Solves gamma * u^q = theta * t * u for u, clamped to (0, 2].
double xi_solve(const SmoothnessParams& params, double t, double theta);

// Returns (lhs, rhs) of the two-sided smoothness inequality
//   0 <= ||x+uy|| - ||x|| - u F_x(y) <= 2 ||x|| * gamma (u||y||/||x||)^q.
std::pair<double, double> smoothness_inequality_check(const SpaceLp& space, const Element& x,
                                                      const Element& y, double u);

// Helpers shared across modules.
Element add_scaled(const Element& a, double c, const Element& b); // a + c*b
Element scaled(const Element& a, double c);
void add_scaled_inplace(Element& a, double c, const Element& b);

} // namespace greedy
