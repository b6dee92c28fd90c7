#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ridgekit/grid.hpp"

namespace ridgekit::detail {

// One segment of the joint K-harmonic problem. States are tuples
// (c1, x2, ..., xK) with c1 in [c1_lo, c1_hi] and x_k within the harmonic band
// of c1; the transition penalty is sum_k lambda_k (x_k' - x_k)^2.
struct JointSegment {
    const Grid<double>* scores = nullptr;  // per-entry reward, column c = bin c+1
    std::size_t row_begin = 0;
    std::size_t row_end = 0;
    std::size_t K = 1;
    int M = 1;  // usable bins
    double beta = 0.0;
    int c1_lo = 1;
    int c1_hi = 1;
    std::span<const double> lambda;
    // When non-empty, the state at row_begin is fixed to this tuple.
    std::vector<int> pinned;
};

// Inclusive bin range of harmonic k (1-based) for fundamental c1, clipped to 1..M.
// Empty when lo > hi.
struct Band {
    int lo;
    int hi;
};
Band harmonic_band(int k, int c1, double beta, int M);

// Exact maximiser; returns one K-tuple per row in [row_begin, row_end).
// Throws Infeasible when no fundamental in range admits every band.
std::vector<std::vector<int>> solve_joint_segment(const JointSegment& seg);

}  // namespace ridgekit::detail
