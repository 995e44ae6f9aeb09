#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "greedy/rng.hpp"
#include "greedy/space.hpp"

namespace greedy {

// Finite dictionary of unit-norm elements. Element order is part of the
// identity: indices are stable and tie-breaking is always lowest index.
class Dictionary {
public:
    Dictionary(SpaceLp space, std::vector<Element> elements, std::string label);

    const SpaceLp& space() const { return space_; }
    std::size_t size() const { return elements_.size(); }
    const Element& element(std::size_t i) const { return elements_[i]; }
    const std::vector<Element>& elements() const { return elements_; }
    const std::string& label() const { return label_; }

    // Norming functional of atom i (cached; rows of a size x dim matrix).
    const Vec& atom_functional(std::size_t i) const;

    // Fingerprint of space, label and element data, used to key cached
    // constants and to stamp traces.
    std::uint64_t fingerprint() const;

private:
    SpaceLp space_;
    std::vector<Element> elements_;
    std::string label_;
    mutable std::vector<Vec> atom_functionals_; // lazily filled
    mutable std::uint64_t fingerprint_ = 0;
};

Dictionary make_canonical(const SpaceLp& space);
Dictionary make_random_unit(const SpaceLp& space, std::size_t count, std::uint64_t seed);
// Real trigonometric system (1, cos kx, sin kx), k = 1..frequencies, sampled
// on the uniform grid of space.dim points and normalized in l_p. Requires
// 2 * frequencies < dim.
Dictionary make_trig_grid(const SpaceLp& space, std::size_t frequencies);
// Haar system on a dyadic grid; requires space.dim == 2^levels and produces
// 2^levels elements.
Dictionary make_haar_grid(const SpaceLp& space, std::size_t levels);
// Basis e'_i = sqrt(1-mu) e_i + sqrt(mu) e_0 in dimension count+1; every
// distinct pair has inner product exactly mu, so coherence is mu at p = 2.
Dictionary make_equiangular(std::size_t count, double mu);

struct DNormResult {
    double value = 0.0;
    std::size_t index = 0;
    int sign = 1;
};
// ||F||_D = max_i |F(g_i)|, with the achieving index and sign.
DNormResult d_norm(const DualFunctional& f, const Dictionary& dict);

// D-seminorm of a space element: max_i |F_{g_i}(x)|.
double d_seminorm(const Dictionary& dict, const Element& x);

enum class TieRule { LowestIndex, ExactMax };

struct Selection {
    std::size_t index = 0;
    int sign = 1;
};
// Weak greedy selection: an element with |F(g)| >= t * ||F||_D. Returns
// nullopt when ||F||_D == 0 (zero functional; caller stops).
std::optional<Selection> select_weak(const DualFunctional& f, const Dictionary& dict, double t,
                                     TieRule rule = TieRule::LowestIndex,
                                     RngStream* realization = nullptr);

double coherence(const Dictionary& dict);

// Restricted-isometry delta over all subsets of subset_size atoms (p = 2
// only): max of max(1 - lambda_min, lambda_max - 1) of subset Gram matrices.
double rip_delta(const Dictionary& dict, std::size_t subset_size);

struct StructuralConstants {
    double coherence = 0.0;
    double rip_delta = 0.0;
    double u = 1.0;     // unconditionality
    double c1 = 1.0;    // Nikol'skii-type l1-X constant
    double v = 1.0;     // l1 incoherence
    std::size_t k = 0;
    std::size_t d_depth = 0;
    double r = 0.5;
    bool exact = true;  // false when grid-assisted (p != 2)
};

// Smallest U with ||f_A - sum_Lambda c_i g_i|| >= U^{-1} ||f_A|| over
// |A| <= K, |A|+|Lambda| <= D. At p = 2 computed from subset Gram
// eigenvalue extremes (exact); otherwise estimated on a coefficient grid
// with the inner minimization solved exactly by convex projection.
double unconditionality_constant(const Dictionary& dict, std::size_t k, std::size_t d_depth);
// Smallest C1 with sum_A |x_i| <= C1 |A|^r ||f_A|| over |A| <= K.
double nikolskii_constant(const Dictionary& dict, std::size_t k, double r);
// Smallest V with sum_A |c_i| <= V |A|^r ||sum_B c_i g_i|| over A within B,
// |A| <= K, |B| <= D.
double l1_incoherence_constant(const Dictionary& dict, std::size_t k, std::size_t d_depth,
                               double r);

StructuralConstants structural_constants(const Dictionary& dict, std::size_t k,
                                         std::size_t d_depth, double r);

struct SparseTerm {
    std::size_t index;
    int sign;
    double coefficient; // >= 0
};
struct SparseRepresentation {
    std::vector<SparseTerm> terms;
    Element combined; // sum of sign * coefficient * g_index

    double l1_mass() const;
};
// Random element of A_1(D): k distinct atoms, random signs, nonnegative
// coefficients summing to one.
SparseRepresentation sample_A1(const Dictionary& dict, std::size_t sparsity, RngStream& rng);

// Enumerates subsets of {0..n-1} of the given size in lexicographic order,
// invoking fn(subset). Throws if C(n, size) exceeds the guard.
void for_each_subset(std::size_t n, std::size_t size,
                     const std::function<void(const std::vector<std::size_t>&)>& fn,
                     std::size_t guard = 1000000);
double binomial(std::size_t n, std::size_t k);

} // namespace greedy
