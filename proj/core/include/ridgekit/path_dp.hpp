#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ridgekit {

// Scratch buffers for quadratic_max_transform; reuse across calls to avoid allocation.
struct EnvelopeWorkspace {
    std::vector<int> hull;
    std::vector<double> breaks;
};

// For sorted source positions `xs` with values `f` (entries may be -inf) and sorted
// target positions `ts`, computes best[t] = max_i f[i] - lambda (ts[t] - xs[i])^2 and
// the maximising source index (lowest position on ties; -1 when every source is -inf).
// Linear in |xs| + |ts| (upper envelope of equal-curvature parabolas).
void quadratic_max_transform(std::span<const int> xs, std::span<const double> f, std::span<const int> ts,
                             double lambda, std::span<double> best, std::span<int> arg,
                             EnvelopeWorkspace& ws);

// A single-path problem: choose c(l) in [lo[l], hi[l]] for l = 0..T-1 maximising
// sum_l unary(l, c(l)) - lambda sum_l (c(l+1) - c(l))^2.
struct ChainProblem {
    std::vector<int> lo;
    std::vector<int> hi;
    std::function<double(std::size_t, int)> unary;
    double lambda = 0.0;
};

struct ChainSolution {
    std::vector<int> path;
    double objective = 0.0;
};

// Exact Viterbi solve; every decision breaks ties toward the lower bin.
ChainSolution solve_chain(const ChainProblem& problem);

}  // namespace ridgekit
