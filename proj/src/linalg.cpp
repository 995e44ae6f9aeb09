#include "greedy/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace greedy {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::transposed() const {
    Mat t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vec Mat::col(std::size_t j) const {
    Vec c(rows);
    for (std::size_t i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) {
    return std::sqrt(dot(a, a));
}

Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vec matvec_t(const Mat& a, const Vec& x) {
    Vec y(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) y[j] += a(i, j) * x[i];
    return y;
}

Mat matmul(const Mat& a, const Mat& b) {
    Mat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat gram(const Mat& a) {
    Mat g(a.cols, a.cols);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t k = j; k < a.cols; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i) s += a(i, j) * a(i, k);
            g(j, k) = s;
            g(k, j) = s;
        }
    return g;
}

LeastSquaresResult solve_least_squares(const Mat& a, const Vec& b, double rank_tol) {
    if (a.rows != b.size()) throw std::invalid_argument("solve_least_squares: size mismatch");
    const std::size_t m = a.rows, n = a.cols;
    // Work on copies; Householder QR column by column, flagging dependent columns.
    Mat r = a;
    Vec rhs = b;
    std::vector<bool> kept(n, true);
    std::vector<std::size_t> pivot_rows; // row index used for column j among kept ones
    std::size_t rank = 0;
    std::vector<Vec> reflectors;
    std::vector<std::size_t> kept_cols;

    for (std::size_t j = 0; j < n; ++j) {
        // column norm below the current reduction row
        double col_norm = 0.0;
        for (std::size_t i = rank; i < m; ++i) col_norm += r(i, j) * r(i, j);
        col_norm = std::sqrt(col_norm);
        double col_full = 0.0;
        for (std::size_t i = 0; i < m; ++i) col_full += a(i, j) * a(i, j);
        col_full = std::sqrt(col_full);
        if (col_norm <= rank_tol * std::max(1.0, col_full) || rank >= m) {
            kept[j] = false;
            continue;
        }
        // Householder vector for rows [rank, m)
        Vec v(m - rank, 0.0);
        double alpha = (r(rank, j) >= 0.0) ? -col_norm : col_norm;
        for (std::size_t i = rank; i < m; ++i) v[i - rank] = r(i, j);
        v[0] -= alpha;
        double vnorm = norm2(v);
        if (vnorm > 0.0)
            for (double& x : v) x /= vnorm;
        // apply to remaining columns and rhs
        auto apply = [&](auto&& get, auto&& set) {
            double s = 0.0;
            for (std::size_t i = rank; i < m; ++i) s += v[i - rank] * get(i);
            s *= 2.0;
            for (std::size_t i = rank; i < m; ++i) set(i, get(i) - s * v[i - rank]);
        };
        for (std::size_t jj = j; jj < n; ++jj)
            apply([&](std::size_t i) { return r(i, jj); },
                  [&](std::size_t i, double x) { r(i, jj) = x; });
        apply([&](std::size_t i) { return rhs[i]; },
              [&](std::size_t i, double x) { rhs[i] = x; });
        reflectors.push_back(v);
        kept_cols.push_back(j);
        ++rank;
    }

    // back substitution on the kept columns
    Vec c(rank, 0.0);
    for (std::size_t k = rank; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t jj = k + 1; jj < rank; ++jj) s -= r(k, kept_cols[jj]) * c[jj];
        double d = r(k, kept_cols[k]);
        c[k] = (d != 0.0) ? s / d : 0.0;
    }

    LeastSquaresResult out;
    out.coeffs.assign(n, 0.0);
    for (std::size_t k = 0; k < rank; ++k) out.coeffs[kept_cols[k]] = c[k];
    out.kept = kept;
    out.dropped_any = (rank < n);
    return out;
}

SymEigResult jacobi_eigh(const Mat& s_in, bool want_vectors) {
    if (s_in.rows != s_in.cols) throw std::invalid_argument("jacobi_eigh: not square");
    const std::size_t n = s_in.rows;
    Mat a = s_in;
    Mat v = want_vectors ? Mat::identity(n) : Mat();

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) < 1e-15 * (1.0 + std::sqrt(off) + std::abs(a(0, 0)))) break;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
        if (std::sqrt(off) <= 1e-14 * std::max(1e-300, scale)) break;

        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a(p, q);
                if (std::abs(apq) <= 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)) + 1e-300))
                    continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                if (want_vectors)
                    for (std::size_t k = 0; k < n; ++k) {
                        double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
            }
    }

    SymEigResult out;
    out.values.resize(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
    if (want_vectors) {
        out.vectors = Mat(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

SvdResult jacobi_svd(const Mat& a_in) {
    // One-sided Jacobi on columns; transpose first when rows < cols.
    bool flipped = a_in.rows < a_in.cols;
    Mat a = flipped ? a_in.transposed() : a_in;
    const std::size_t m = a.rows, n = a.cols;
    Mat v = Mat::identity(n);

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e-16 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < m; ++i) {
                    double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        if (!rotated) break;
    }

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
        sv[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });

    Mat u(m, n), vv(n, n);
    Vec s(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t j = order[k];
        s[k] = sv[j];
        for (std::size_t i = 0; i < m; ++i)
            u(i, k) = (sv[j] > 0.0) ? a(i, j) / sv[j] : 0.0;
        for (std::size_t i = 0; i < n; ++i) vv(i, k) = v(i, j);
    }

    SvdResult out;
    if (flipped) {
        out.u = vv;
        out.v = u;
    } else {
        out.u = u;
        out.v = vv;
    }
    out.s = s;
    return out;
}

std::optional<Vec> lu_solve(const Mat& a_in, const Vec& b_in, double pivot_tol) {
    if (a_in.rows != a_in.cols || a_in.rows != b_in.size())
        throw std::invalid_argument("lu_solve: size mismatch");
    const std::size_t n = a_in.rows;
    Mat a = a_in;
    Vec b = b_in;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (std::abs(a(piv, k)) < pivot_tol) return std::nullopt;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vec x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
        x[k] = s / a(k, k);
    }
    return x;
}

LinfFitResult linf_fit(const Mat& m_in, const Vec& b) {
    // LP:  min s  s.t.  m c - s <= b,  -m c - s <= -b, c free, s >= 0.
    // Variables x = (c+, c-, s) >= 0. Standard simplex with slack start;
    // the s column is driven in first to restore feasibility.
    const std::size_t nr = m_in.rows;      // residual rows
    const std::size_t nc = m_in.cols;      // coefficients
    const std::size_t nvar = 2 * nc + 1;   // structural variables
    const std::size_t rows = 2 * nr;
    const std::size_t cols = nvar + rows;  // plus slacks
    if (b.size() != nr) throw std::invalid_argument("linf_fit: size mismatch");
    if (nr == 0) return {Vec(nc, 0.0), 0.0};

    // tableau [A | I | rhs], objective row last
    std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            t[i][j] = m_in(i, j);
            t[i][nc + j] = -m_in(i, j);
            t[nr + i][j] = -m_in(i, j);
            t[nr + i][nc + j] = m_in(i, j);
        }
        t[i][2 * nc] = -1.0;
        t[nr + i][2 * nc] = -1.0;
        t[i][cols] = b[i];
        t[nr + i][cols] = -b[i];
        t[i][nvar + i] = 1.0;
        t[nr + i][nvar + nr + i] = 1.0;
    }
    t[rows][2 * nc] = 1.0; // minimize s

    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = nvar + i;

    auto pivot = [&](std::size_t pr, std::size_t pc) {
        double pv = t[pr][pc];
        for (double& x : t[pr]) x /= pv;
        for (std::size_t i = 0; i <= rows; ++i) {
            if (i == pr) continue;
            double f = t[i][pc];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    // force s basic through the most negative rhs row (restores feasibility;
    // the s column has coefficient -1 in every constraint row)
    {
        std::size_t worst = rows;
        double wv = -1e-300;
        for (std::size_t i = 0; i < rows; ++i)
            if (t[i][cols] < 0.0 && -t[i][cols] > wv) {
                wv = -t[i][cols];
                worst = i;
            }
        if (worst < rows) pivot(worst, 2 * nc);
    }

    // primal simplex with Bland's rule
    for (int iter = 0; iter < 20000; ++iter) {
        std::size_t pc = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (t[rows][j] < -1e-12) { pc = j; break; }
        if (pc == cols) break;
        std::size_t pr = rows;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][pc] > 1e-12) {
                double ratio = t[i][cols] / t[i][pc];
                if (ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && (pr == rows || basis[i] < basis[pr]))) {
                    best_ratio = ratio;
                    pr = i;
                }
            }
        }
        if (pr == rows) break; // unbounded: cannot happen, s bounded below by 0
        pivot(pr, pc);
    }

    LinfFitResult out;
    out.coeffs.assign(nc, 0.0);
    Vec x(nvar, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        if (basis[i] < nvar) x[basis[i]] = t[i][cols];
    for (std::size_t j = 0; j < nc; ++j) out.coeffs[j] = x[j] - x[nc + j];
    out.value = x[2 * nc];
    return out;
}

Mat orthonormal_columns(const Mat& a, double tol) {
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < a.cols; ++j) {
        Vec v = a.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& q : basis) {
                double c = dot(q, v);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
            }
        double nv = norm2(v);
        if (nv > tol) {
            for (double& x : v) x /= nv;
            basis.push_back(std::move(v));
        }
    }
    Mat q(a.rows, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < a.rows; ++i) q(i, j) = basis[j][i];
    return q;
}

} // namespace greedy
