#include "greedy/bilinear.hpp"

#include <cmath>
#include <stdexcept>

#include "greedy/rng.hpp"

namespace greedy {

double frobenius_norm(const MatrixSignal& matrix) {
    double s = 0.0;
    for (double x : matrix.data) s += x * x;
    return std::sqrt(s);
}

namespace {

// dominant singular triple of r by power iteration on r^T r
RankOneTerm dominant_triple(const Mat& r, RngStream& rng) {
    const std::size_t n1 = r.rows, n2 = r.cols;
    // deterministic start: column of r^T r with the largest diagonal entry
    Vec colnorm2(n2, 0.0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) colnorm2[j] += r(i, j) * r(i, j);
    std::size_t j0 = 0;
    for (std::size_t j = 1; j < n2; ++j)
        if (colnorm2[j] > colnorm2[j0]) j0 = j;

    RankOneTerm out;
    if (colnorm2[j0] == 0.0) return out; // zero residual

    auto iterate = [&](Vec v) -> RankOneTerm {
        double nv = norm2(v);
        for (double& x : v) x /= nv;
        double sigma_prev = -1.0;
        for (int it = 0; it < 5000; ++it) {
            Vec rv = matvec(r, v);          // n1
            Vec w = matvec_t(r, rv);        // n2 = r^T r v
            double nw = norm2(w);
            if (nw == 0.0) break;
            for (double& x : w) x /= nw;
            v = w;
            double sigma = norm2(matvec(r, v));
            if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= 1e-12 * (sigma + 1e-300))
                break;
            sigma_prev = sigma;
        }
        RankOneTerm t;
        Vec rv = matvec(r, v);
        t.c = norm2(rv);
        if (t.c == 0.0) return t;
        t.u = rv;
        for (double& x : t.u) x /= t.c;
        t.v = v;
        return t;
    };

    Vec start(n2, 0.0);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j) start[j] += r(i, j) * r(i, j0);
    RankOneTerm best = iterate(start);
    // random restarts guard against a start vector orthogonal to the
    // dominant space
    for (int restart = 0; restart < 3; ++restart) {
        Vec v(n2);
        for (double& x : v) x = rng.normal();
        RankOneTerm t = iterate(v);
        if (t.c > best.c * (1.0 + 1e-12)) best = t;
    }
    return best;
}

} // namespace

RankOneGreedyResult pga_rank_one(const MatrixSignal& matrix, std::size_t m,
                                 std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("pga_rank_one: m >= 1");
    RngStream rng = RngStream::derive(seed, "bilinear:restart");
    RankOneGreedyResult out;
    Mat r = matrix;
    out.residual_norms.push_back(frobenius_norm(r));
    for (std::size_t step = 0; step < m; ++step) {
        RankOneTerm t = dominant_triple(r, rng);
        if (t.c == 0.0) break; // zero residual: nothing to append
        for (std::size_t i = 0; i < r.rows; ++i)
            for (std::size_t j = 0; j < r.cols; ++j) r(i, j) -= t.c * t.u[i] * t.v[j];
        out.terms.push_back(std::move(t));
        out.residual_norms.push_back(frobenius_norm(r));
    }
    return out;
}

std::vector<RankOneTerm> schmidt_expansion(const MatrixSignal& matrix) {
    auto svd = jacobi_svd(matrix);
    std::vector<RankOneTerm> out;
    for (std::size_t k = 0; k < svd.s.size(); ++k) {
        if (svd.s[k] <= 0.0) break;
        RankOneTerm t;
        t.c = svd.s[k];
        t.u = svd.u.col(k);
        t.v = svd.v.col(k);
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace greedy
