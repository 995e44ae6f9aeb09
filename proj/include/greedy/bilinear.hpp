#pragma once

#include <cstdint>
#include <vector>

#include "greedy/linalg.hpp"

namespace greedy {

// A two-variable signal sampled on a product grid, Frobenius geometry.
using MatrixSignal = Mat;

struct RankOneTerm {
    Vec u; // unit left factor
    Vec v; // unit right factor
    double c = 0.0; // nonnegative weight
};

struct RankOneGreedyResult {
    std::vector<RankOneTerm> terms;
    std::vector<double> residual_norms; // [0] = ||f||_F, then after each term
};

// Pure greedy with respect to the rank-one dictionary: m steps of dominant
// singular triple extraction (power iteration, deterministic start) and
// deflation.
RankOneGreedyResult pga_rank_one(const MatrixSignal& matrix, std::size_t m,
                                 std::uint64_t seed = 0);

// Full SVD as an ordered list of rank-one terms, s_1 >= s_2 >= ...
std::vector<RankOneTerm> schmidt_expansion(const MatrixSignal& matrix);

double frobenius_norm(const MatrixSignal& matrix);

} // namespace greedy
