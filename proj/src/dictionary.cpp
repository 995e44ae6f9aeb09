#include "greedy/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "greedy/steps.hpp"

namespace greedy {

namespace {

void normalize_in_space(const SpaceLp& space, Element& g) {
    double n = norm(space, g);
    if (n == 0.0) throw std::invalid_argument("dictionary element must be nonzero");
    for (double& x : g) x /= n;
}

} // namespace

Dictionary::Dictionary(SpaceLp space, std::vector<Element> elements, std::string label)
    : space_(space), elements_(std::move(elements)), label_(std::move(label)) {
    if (elements_.empty()) throw std::invalid_argument("Dictionary: needs at least one element");
    for (const Element& g : elements_) {
        if (g.size() != space_.dim) throw std::invalid_argument("Dictionary: dimension mismatch");
        double n = norm(space_, g);
        if (std::abs(n - 1.0) > 1e-9)
            throw std::invalid_argument("Dictionary: element norm must be 1 within 1e-9");
    }
}

const Vec& Dictionary::atom_functional(std::size_t i) const {
    if (atom_functionals_.empty()) {
        atom_functionals_.resize(elements_.size());
        for (std::size_t j = 0; j < elements_.size(); ++j)
            atom_functionals_[j] = norming_functional(space_, elements_[j]).coords;
    }
    return atom_functionals_[i];
}

std::uint64_t Dictionary::fingerprint() const {
    if (fingerprint_ == 0) {
        std::string buf = label_;
        char tmp[64];
        std::snprintf(tmp, sizeof tmp, "|n=%zu|p=%.17g|N=%zu", space_.dim, space_.p,
                      elements_.size());
        buf += tmp;
        std::uint64_t h = fnv1a64(buf);
        for (const Element& g : elements_)
            for (double x : g) {
                std::uint64_t bits;
                static_assert(sizeof bits == sizeof x);
                std::memcpy(&bits, &x, sizeof bits);
                h ^= bits;
                h *= 0x100000001b3ULL;
            }
        fingerprint_ = h ? h : 1;
    }
    return fingerprint_;
}

Dictionary make_canonical(const SpaceLp& space) {
    std::vector<Element> els(space.dim, Element(space.dim, 0.0));
    for (std::size_t i = 0; i < space.dim; ++i) els[i][i] = 1.0;
    return Dictionary(space, std::move(els), "canonical");
}

Dictionary make_random_unit(const SpaceLp& space, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("make_random_unit: count >= 1");
    RngStream rng = RngStream::derive(seed, "dict:random_unit");
    std::vector<Element> els;
    els.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Element g(space.dim);
        for (double& x : g) x = rng.normal();
        normalize_in_space(space, g);
        els.push_back(std::move(g));
    }
    return Dictionary(space, std::move(els), "random_unit:" + std::to_string(seed));
}

Dictionary make_trig_grid(const SpaceLp& space, std::size_t frequencies) {
    const std::size_t n = space.dim;
    if (frequencies < 1 || 2 * frequencies >= n)
        throw std::invalid_argument("make_trig_grid: requires 1 <= K and 2K < dim");
    std::vector<Element> els;
    auto push = [&](auto&& fn) {
        Element g(n);
        for (std::size_t j = 0; j < n; ++j) g[j] = fn(2.0 * std::numbers::pi * j / n);
        normalize_in_space(space, g);
        els.push_back(std::move(g));
    };
    push([](double) { return 1.0; });
    for (std::size_t k = 1; k <= frequencies; ++k) {
        push([k](double x) { return std::cos(k * x); });
        push([k](double x) { return std::sin(k * x); });
    }
    return Dictionary(space, std::move(els), "trig:K=" + std::to_string(frequencies));
}

Dictionary make_haar_grid(const SpaceLp& space, std::size_t levels) {
    const std::size_t n = std::size_t(1) << levels;
    if (space.dim != n)
        throw std::invalid_argument("make_haar_grid: space dim must equal 2^levels");
    std::vector<Element> els;
    Element flat(n, 1.0);
    normalize_in_space(space, flat);
    els.push_back(flat);
    for (std::size_t level = 0; level < levels; ++level) {
        std::size_t blocks = std::size_t(1) << level;
        std::size_t width = n / blocks;
        for (std::size_t b = 0; b < blocks; ++b) {
            Element g(n, 0.0);
            for (std::size_t j = 0; j < width / 2; ++j) {
                g[b * width + j] = 1.0;
                g[b * width + width / 2 + j] = -1.0;
            }
            normalize_in_space(space, g);
            els.push_back(std::move(g));
        }
    }
    return Dictionary(space, std::move(els), "haar:L=" + std::to_string(levels));
}

Dictionary make_equiangular(std::size_t count, double mu) {
    if (count < 2 || mu <= 0.0 || mu >= 1.0)
        throw std::invalid_argument("make_equiangular: count >= 2, 0 < mu < 1");
    SpaceLp space(count + 1, 2.0);
    std::vector<Element> els;
    for (std::size_t i = 0; i < count; ++i) {
        Element g(count + 1, 0.0);
        g[0] = std::sqrt(mu);
        g[i + 1] = std::sqrt(1.0 - mu);
        els.push_back(std::move(g));
    }
    return Dictionary(space, std::move(els), "equiangular:mu=" + std::to_string(mu));
}

DNormResult d_norm(const DualFunctional& f, const Dictionary& dict) {
    if (f.coords.size() != dict.space().dim) throw std::invalid_argument("d_norm: dim mismatch");
    DNormResult best;
    best.value = -1.0;
    for (std::size_t i = 0; i < dict.size(); ++i) {
        double v = f(dict.element(i));
        double a = std::abs(v);
        if (a > best.value) {
            best.value = a;
            best.index = i;
            best.sign = (v >= 0.0) ? 1 : -1;
        }
    }
    return best;
}

double d_seminorm(const Dictionary& dict, const Element& x) {
    double best = 0.0;
    for (std::size_t i = 0; i < dict.size(); ++i)
        best = std::max(best, std::abs(dot(dict.atom_functional(i), x)));
    return best;
}

std::optional<Selection> select_weak(const DualFunctional& f, const Dictionary& dict, double t,
                                     TieRule rule, RngStream* realization) {
    if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("select_weak: t in (0,1]");
    DNormResult top = d_norm(f, dict);
    if (top.value == 0.0) return std::nullopt;
    if (rule == TieRule::ExactMax) return Selection{top.index, top.sign};
    double threshold = t * top.value;
    if (realization != nullptr) {
        std::vector<Selection> all;
        for (std::size_t i = 0; i < dict.size(); ++i) {
            double v = f(dict.element(i));
            if (std::abs(v) >= threshold) all.push_back({i, v >= 0.0 ? 1 : -1});
        }
        return all[static_cast<std::size_t>(realization->uniform_int(0, int(all.size()) - 1))];
    }
    for (std::size_t i = 0; i < dict.size(); ++i) {
        double v = f(dict.element(i));
        if (std::abs(v) >= threshold) return Selection{i, v >= 0.0 ? 1 : -1};
    }
    return Selection{top.index, top.sign}; // unreachable (top satisfies)
}

double coherence(const Dictionary& dict) {
    if (dict.size() < 2) return 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < dict.size(); ++i)
        for (std::size_t j = 0; j < dict.size(); ++j) {
            if (i == j) continue;
            best = std::max(best, std::abs(dot(dict.atom_functional(i), dict.element(j))));
        }
    return best;
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double v = 1.0;
    for (std::size_t i = 0; i < k; ++i) v = v * double(n - i) / double(i + 1);
    return v;
}

void for_each_subset(std::size_t n, std::size_t size,
                     const std::function<void(const std::vector<std::size_t>&)>& fn,
                     std::size_t guard) {
    if (size > n) throw std::invalid_argument("for_each_subset: size > n");
    if (binomial(n, size) > double(guard))
        throw std::invalid_argument("for_each_subset: combinatorial guard exceeded");
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    if (size == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        std::size_t i = size;
        while (i-- > 0) {
            if (idx[i] != i + n - size) {
                ++idx[i];
                for (std::size_t j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return;
        }
    }
}

namespace {

Mat atoms_matrix(const Dictionary& dict, const std::vector<std::size_t>& cols) {
    Mat m(dict.space().dim, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dict.space().dim; ++i) m(i, j) = dict.element(cols[j])[i];
    return m;
}

// Deterministic grid of direction vectors in R^k used as numerator
// candidates for the p != 2 constants. Shared across U/C1/V so the computed
// values stay mutually consistent (V <= C1*U by construction).
std::vector<Vec> coefficient_grid(std::size_t k, std::uint64_t salt) {
    std::vector<Vec> out;
    // all sign patterns
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
        Vec v(k);
        for (std::size_t i = 0; i < k; ++i) v[i] = (mask >> i & 1) ? -1.0 : 1.0;
        out.push_back(v);
    }
    // coordinate directions with a dominant entry
    for (std::size_t i = 0; i < k; ++i) {
        Vec v(k, 0.25);
        v[i] = 1.0;
        out.push_back(v);
        v[i] = -1.0;
        out.push_back(v);
    }
    // seeded random directions
    RngStream rng = RngStream::derive(salt, "coeff_grid");
    for (int rep = 0; rep < 64; ++rep) {
        Vec v(k);
        for (double& x : v) x = rng.normal();
        out.push_back(v);
    }
    return out;
}

// min over c of || base - sum_j c_j g_{cols[j]} ||_p via the convex
// projector from the steps module.
double projection_distance(const Dictionary& dict, const Element& base,
                           const std::vector<std::size_t>& cols) {
    std::vector<Element> span;
    span.reserve(cols.size());
    for (std::size_t j : cols) span.push_back(dict.element(j));
    SolverOptions opts;
    opts.tol_grad = 1e-9;
    return chebyshev_project(dict.space(), base, span, opts).residual_norm;
}

} // namespace

double rip_delta(const Dictionary& dict, std::size_t subset_size) {
    if (dict.space().p != 2.0) throw std::invalid_argument("rip_delta: p must be 2");
    if (subset_size < 1) throw std::invalid_argument("rip_delta: subset size >= 1");
    subset_size = std::min(subset_size, dict.size());
    double delta = 0.0;
    for_each_subset(dict.size(), subset_size, [&](const std::vector<std::size_t>& s) {
        Mat g = gram(atoms_matrix(dict, s));
        auto eig = jacobi_eigh(g);
        delta = std::max({delta, eig.values.back() - 1.0, 1.0 - eig.values.front()});
    });
    return delta;
}

double unconditionality_constant(const Dictionary& dict, std::size_t k, std::size_t d_depth) {
    if (k < 1 || d_depth < k)
        throw std::invalid_argument("unconditionality_constant: need 1 <= K <= D");
    std::size_t d = std::min(d_depth, dict.size());
    if (dict.space().p == 2.0) {
        // Riesz-ratio route: max over size-D subsets of sqrt(lmax/lmin).
        double best = 1.0;
        for_each_subset(dict.size(), d, [&](const std::vector<std::size_t>& s) {
            Mat g = gram(atoms_matrix(dict, s));
            auto eig = jacobi_eigh(g);
            double lmin = eig.values.front();
            if (lmin <= 1e-14) {
                best = std::numeric_limits<double>::infinity();
                return;
            }
            best = std::max(best, std::sqrt(eig.values.back() / lmin));
        });
        return best;
    }
    // grid estimate of sup ||f_A|| / min_c ||f_A - sum_Lambda c g||
    double best = 1.0;
    std::size_t ka = std::min(k, dict.size());
    for (std::size_t asz = 1; asz <= ka; ++asz) {
        auto grid = coefficient_grid(asz, dict.fingerprint());
        for_each_subset(dict.size(), asz, [&](const std::vector<std::size_t>& a) {
            // complementary Lambda subsets of size up to d - |A|
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < dict.size(); ++i)
                if (std::find(a.begin(), a.end(), i) == a.end()) rest.push_back(i);
            for (std::size_t lsz = 0; lsz + asz <= d && lsz <= rest.size(); ++lsz) {
                for_each_subset(rest.size(), lsz, [&](const std::vector<std::size_t>& li) {
                    std::vector<std::size_t> lambda(lsz);
                    for (std::size_t j = 0; j < lsz; ++j) lambda[j] = rest[li[j]];
                    for (const Vec& x : grid) {
                        Element fa(dict.space().dim, 0.0);
                        for (std::size_t j = 0; j < asz; ++j)
                            add_scaled_inplace(fa, x[j], dict.element(a[j]));
                        double nfa = norm(dict.space(), fa);
                        if (nfa < 1e-12) continue;
                        double dist = lsz == 0 ? nfa : projection_distance(dict, fa, lambda);
                        if (dist > 1e-14) best = std::max(best, nfa / dist);
                    }
                });
            }
        });
    }
    return best;
}

double nikolskii_constant(const Dictionary& dict, std::size_t k, double r) {
    if (k < 1) throw std::invalid_argument("nikolskii_constant: K >= 1");
    std::size_t ka = std::min(k, dict.size());
    double best = 0.0;
    for (std::size_t asz = 1; asz <= ka; ++asz) {
        double scale = std::pow(double(asz), r);
        if (dict.space().p == 2.0) {
            for_each_subset(dict.size(), asz, [&](const std::vector<std::size_t>& a) {
                // max ||x||_1 / ||G_A x||_2 = max over sign patterns sigma of
                // || (G_A^+ B)^T sigma ||_2 with B an orthonormal span basis.
                Mat ga = atoms_matrix(dict, a);
                Mat b = orthonormal_columns(ga);
                if (b.cols < asz) {
                    best = std::numeric_limits<double>::infinity();
                    return;
                }
                // m = (G^T G)^{-1} G^T B  (asz x asz)
                Mat gtg = gram(ga);
                Mat gtb = matmul(ga.transposed(), b);
                Mat m(asz, b.cols);
                for (std::size_t j = 0; j < b.cols; ++j) {
                    auto sol = lu_solve(gtg, gtb.col(j));
                    if (!sol) {
                        best = std::numeric_limits<double>::infinity();
                        return;
                    }
                    for (std::size_t i = 0; i < asz; ++i) m(i, j) = (*sol)[i];
                }
                for (std::size_t mask = 0; mask < (std::size_t(1) << asz); ++mask) {
                    Vec sigma(asz);
                    for (std::size_t i = 0; i < asz; ++i) sigma[i] = (mask >> i & 1) ? -1.0 : 1.0;
                    double v = norm2(matvec_t(m, sigma));
                    best = std::max(best, v / scale);
                }
            });
        } else {
            auto grid = coefficient_grid(asz, dict.fingerprint());
            for_each_subset(dict.size(), asz, [&](const std::vector<std::size_t>& a) {
                for (const Vec& x : grid) {
                    Element fa(dict.space().dim, 0.0);
                    double l1 = 0.0;
                    for (std::size_t j = 0; j < asz; ++j) {
                        add_scaled_inplace(fa, x[j], dict.element(a[j]));
                        l1 += std::abs(x[j]);
                    }
                    double nfa = norm(dict.space(), fa);
                    if (nfa > 1e-14) best = std::max(best, l1 / (scale * nfa));
                }
            });
        }
    }
    return best;
}

double l1_incoherence_constant(const Dictionary& dict, std::size_t k, std::size_t d_depth,
                               double r) {
    if (k < 1 || d_depth < k)
        throw std::invalid_argument("l1_incoherence_constant: need 1 <= K <= D");
    std::size_t d = std::min(d_depth, dict.size());
    std::size_t ka = std::min(k, dict.size());
    double best = 0.0;
    for (std::size_t bsz = 1; bsz <= d; ++bsz) {
        for_each_subset(dict.size(), bsz, [&](const std::vector<std::size_t>& bset) {
            Mat gb = atoms_matrix(dict, bset);
            if (dict.space().p == 2.0) {
                Mat q = orthonormal_columns(gb);
                if (q.cols < bsz) {
                    best = std::numeric_limits<double>::infinity();
                    return;
                }
                Mat gtg = gram(gb);
                Mat gtq = matmul(gb.transposed(), q);
                Mat m(bsz, q.cols);
                for (std::size_t j = 0; j < q.cols; ++j) {
                    auto sol = lu_solve(gtg, gtq.col(j));
                    if (!sol) {
                        best = std::numeric_limits<double>::infinity();
                        return;
                    }
                    for (std::size_t i = 0; i < bsz; ++i) m(i, j) = (*sol)[i];
                }
                std::size_t amax = std::min(ka, bsz);
                for (std::size_t asz = 1; asz <= amax; ++asz) {
                    double scale = std::pow(double(asz), r);
                    for_each_subset(bsz, asz, [&](const std::vector<std::size_t>& arows) {
                        for (std::size_t mask = 0; mask < (std::size_t(1) << asz); ++mask) {
                            Vec acc(m.cols, 0.0);
                            for (std::size_t i = 0; i < asz; ++i) {
                                double s = (mask >> i & 1) ? -1.0 : 1.0;
                                for (std::size_t j = 0; j < m.cols; ++j)
                                    acc[j] += s * m(arows[i], j);
                            }
                            best = std::max(best, norm2(acc) / scale);
                        }
                    });
                }
            } else {
                auto grid = coefficient_grid(bsz, dict.fingerprint());
                std::size_t amax = std::min(ka, bsz);
                for (const Vec& c : grid) {
                    Element fb(dict.space().dim, 0.0);
                    for (std::size_t j = 0; j < bsz; ++j)
                        add_scaled_inplace(fb, c[j], dict.element(bset[j]));
                    double nfb = norm(dict.space(), fb);
                    if (nfb < 1e-14) continue;
                    // best A for this c: the asz largest |c_j|
                    std::vector<std::size_t> order(bsz);
                    for (std::size_t i = 0; i < bsz; ++i) order[i] = i;
                    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                        return std::abs(c[i]) > std::abs(c[j]);
                    });
                    double l1 = 0.0;
                    for (std::size_t asz = 1; asz <= amax; ++asz) {
                        l1 += std::abs(c[order[asz - 1]]);
                        best = std::max(best, l1 / (std::pow(double(asz), r) * nfb));
                    }
                }
            }
        });
    }
    return best;
}

StructuralConstants structural_constants(const Dictionary& dict, std::size_t k,
                                         std::size_t d_depth, double r) {
    StructuralConstants sc;
    sc.k = k;
    sc.d_depth = d_depth;
    sc.r = r;
    sc.coherence = coherence(dict);
    sc.exact = (dict.space().p == 2.0);
    if (sc.exact) sc.rip_delta = rip_delta(dict, std::min(d_depth, dict.size()));
    sc.u = unconditionality_constant(dict, k, d_depth);
    sc.c1 = nikolskii_constant(dict, k, r);
    sc.v = l1_incoherence_constant(dict, k, d_depth, r);
    return sc;
}

double SparseRepresentation::l1_mass() const {
    double s = 0.0;
    for (const SparseTerm& t : terms) s += t.coefficient;
    return s;
}

SparseRepresentation sample_A1(const Dictionary& dict, std::size_t sparsity, RngStream& rng) {
    if (sparsity < 1 || sparsity > dict.size())
        throw std::invalid_argument("sample_A1: sparsity must be in [1, N]");
    // k distinct indices by partial shuffle
    std::vector<std::size_t> pool(dict.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    for (std::size_t i = 0; i < sparsity; ++i) {
        std::size_t j = i + std::size_t(rng.uniform_int(0, int(pool.size() - i) - 1));
        std::swap(pool[i], pool[j]);
    }
    // Dirichlet(1,..,1) via normalized exponentials
    Vec w(sparsity);
    double total = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    SparseRepresentation rep;
    rep.combined.assign(dict.space().dim, 0.0);
    for (std::size_t i = 0; i < sparsity; ++i) {
        SparseTerm t{pool[i], rng.sign(), w[i] / total};
        add_scaled_inplace(rep.combined, t.sign * t.coefficient, dict.element(t.index));
        rep.terms.push_back(t);
    }
    std::sort(rep.terms.begin(), rep.terms.end(),
              [](const SparseTerm& a, const SparseTerm& b) { return a.index < b.index; });
    return rep;
}

} // namespace greedy
