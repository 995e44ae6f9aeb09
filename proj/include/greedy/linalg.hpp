#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace greedy {

using Vec = std::vector<double>;

// Dense row-major matrix, small sizes only (desk scale).
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t n);
    Mat transposed() const;
    Vec col(std::size_t j) const;
};

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
Vec matvec(const Mat& a, const Vec& x);
Vec matvec_t(const Mat& a, const Vec& x); // a^T x
Mat matmul(const Mat& a, const Mat& b);
Mat gram(const Mat& a); // a^T a

// Least-squares solution of a x = b via Householder QR (rows >= effective rank).
// Columns whose QR diagonal falls below rank_tol are treated as dependent:
// their coefficient is set to zero and dropped_any is set.
struct LeastSquaresResult {
    Vec coeffs;
    bool dropped_any = false;
    std::vector<bool> kept; // per column
};
LeastSquaresResult solve_least_squares(const Mat& a, const Vec& b, double rank_tol = 1e-10);

// Eigen-decomposition of a symmetric matrix by the cyclic Jacobi method.
// Eigenvalues ascending; vectors (optional) are the columns of v.
struct SymEigResult {
    Vec values;
    Mat vectors;
};
SymEigResult jacobi_eigh(const Mat& s, bool want_vectors = false);

// Thin SVD by one-sided Jacobi. Singular values descending,
// a = u * diag(s) * v^T, u: rows x k, v: cols x k, k = min(rows, cols).
struct SvdResult {
    Mat u;
    Vec s;
    Mat v;
};
SvdResult jacobi_svd(const Mat& a);

// Solves a square system by LU with partial pivoting. Returns nullopt when a
// pivot falls below pivot_tol (numerically singular).
std::optional<Vec> lu_solve(const Mat& a, const Vec& b, double pivot_tol = 1e-12);

// Chebyshev (l_inf) linear fit: minimizes max_i |b_i - (m c)_i| over c.
// Solved exactly as a linear program by the simplex method (Bland's rule).
struct LinfFitResult {
    Vec coeffs;
    double value = 0.0;
};
LinfFitResult linf_fit(const Mat& m, const Vec& b);

// Gram-Schmidt orthonormal basis of the column span (for p=2 geometry work).
// Drops columns whose residual after orthogonalization is below tol.
Mat orthonormal_columns(const Mat& a, double tol = 1e-12);

} // namespace greedy
