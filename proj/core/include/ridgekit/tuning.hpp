#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

// (1/(1-alpha)) log sum p_i^alpha with p = v / sum v.
double renyi_entropy(std::span<const double> v, double alpha);

// lambda_k = (1 - (k-1) delta_lambda) lambda1, k = 1..K.
std::vector<double> lambda_schedule(double lambda1, double delta_lambda, std::size_t K);

// n points log-uniform on [lo, hi] (endpoints included).
std::vector<double> log_uniform_grid(double lo, double hi, std::size_t n);

struct ParamGrid {
    std::vector<double> lambda1_candidates;
    std::vector<double> beta_candidates;
    double delta_lambda = 0.1;
    std::size_t K = 3;
    double alpha = 2.4;
    double mask_delta_hz = 0.0;  // masking half-width; 0 -> the reconstruction default per ridge
    int exponent = 2;

    // Seven lambdas on [0.1, 10] and six betas on [2^-6, 2^-1) (the upper end excluded).
    static ParamGrid defaults(std::size_t K = 3);
    void validate() const;
};

struct GridScore {
    double lambda1 = 0.0;
    double beta = 0.0;
    double score = 0.0;
    bool feasible = false;
};

struct TuningResult {
    double lambda1 = 0.0;
    double beta = 0.0;
    double score = 0.0;
    std::vector<GridScore> grid;
};

// Mean over time of the Renyi entropy of each row of |R| after masking the K
// ridges; an all-zero masked row counts as log(M) (the flat-row maximum).
double masked_entropy_score(const Tfr& R, const RidgeSet& ridges, int mask_half_width, double alpha);

// Mask half-width in bins used for a ridge set under `grid`.
int mask_half_width(const ParamGrid& grid, const RidgeSet& ridges);

// Argmax of the masked entropy score over the grid; ties go to smaller lambda1, then smaller beta.
TuningResult select_params(const Tfr& R, const ParamGrid& grid, const SegmentPlan& plan);

void write_grid_csv(const std::string& path, const TuningResult& r);

}  // namespace ridgekit
