#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ridgekit/grid.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

// Integer frequency-bin path, one bin (1..M) per time sample.
struct Ridge {
    std::vector<int> bins;
    double dt = 1.0;
    double dxi = 1.0;
    double t0 = 0.0;

    std::size_t size() const noexcept { return bins.size(); }
    double hz(std::size_t l) const noexcept { return bins[l] * dxi; }
    double mean_bin() const;
};

// K ridges, row k (0-based) tracking harmonic k+1.
struct RidgeSet {
    std::vector<Ridge> rows;
    double beta = 0.0;

    std::size_t harmonics() const noexcept { return rows.size(); }
    const Ridge& fundamental() const { return rows.front(); }
};

// Segment breakpoints t_0 = 0 < t_1 < ... < t_Q = N and per-segment fundamental half-widths (bins).
struct SegmentPlan {
    std::vector<std::size_t> breakpoints;
    std::vector<int> half_widths;  // one per segment; unused for the first segment

    std::size_t segments() const noexcept { return half_widths.size(); }
    void validate(std::size_t N) const;
};

// Equal segments of `segment_s` seconds and a half-width of `band_hz` converted to bins (rounded up).
SegmentPlan default_plan(std::size_t N, double dt, double dxi, double segment_s = 1.0, double band_hz = 1.0);

// A single segment spanning the whole axis.
SegmentPlan single_segment_plan(std::size_t N);

struct PenaltyConfig {
    std::vector<double> lambda;  // smoothness, one per harmonic
    std::vector<double> mu;      // similarity, one per harmonic (entry 0 unused)

    void validate(std::size_t K) const;
};

// Log-normalised TFR magnitudes log(|R| / sum|R|), floored at log(eps).
struct NormalizedTfr {
    Grid<double> values;
    double dt = 1.0;
    double dxi = 1.0;
    double t0 = 0.0;

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }
};

NormalizedTfr normalize_tfr(const Tfr& R);

// Per-entry reward: the log ratio itself for exponent 1, minus its square for
// exponent 2 (both increase with the magnitude).
double entry_score(double normalized, int exponent);

// sum_l score(R~(l, c(l))) - lambda sum_l (c(l+1)-c(l))^2
double single_objective(const NormalizedTfr& R, const Ridge& c, double lambda, int exponent = 1);

// sum_l score(R~(l, h(l))) - lambda sum (dh)^2 - mu sum_l (h(l) - k c1(l))^2
double modified_objective(const NormalizedTfr& R, const Ridge& h, const Ridge& c1, int k, double lambda,
                          double mu, int exponent = 1);

// sum_k [sum_l score(R~(l, c_k(l))) - lambda_k sum (dc_k)^2]
double mhrd_objective(const NormalizedTfr& R, const RidgeSet& c, std::span<const double> lambda, int exponent);

// True when |c_k(l) - k c_1(l)| <= beta c_1(l) for every row and time.
bool satisfies_band(const RidgeSet& c, double beta);

// Whether bin x is admissible for harmonic k (1-based) given fundamental bin c1.
bool in_harmonic_band(int x, int k, int c1, double beta);

struct SingleRdOptions {
    int exponent = 1;
};

Ridge single_rd(const NormalizedTfr& R, double lambda1, const SingleRdOptions& opts = {});
Ridge single_rd(const Tfr& R, double lambda1, const SingleRdOptions& opts = {});

// Zero entries with bin in [c(n) - eta_minus(n), c(n) + eta_plus(n)] (clipped to 1..M).
Tfr mask_tfr(const Tfr& R, const Ridge& c, std::span<const int> eta_minus, std::span<const int> eta_plus);

// Masks every row of a RidgeSet with a constant half-width.
Tfr mask_ridges(const Tfr& R, const RidgeSet& c, int half_width);

struct MhrdOptions {
    int exponent = 2;
    // Optional bounds (bins, inclusive) on the fundamental, applied in every segment.
    std::optional<int> fundamental_min;
    std::optional<int> fundamental_max;
};

// Segmentwise exact maximisation of the joint K-harmonic objective over the
// band-constrained feasible set. Segment q >= 2 also contains the previous
// segment's last row as a pinned first row.
RidgeSet mhrd(const NormalizedTfr& R, std::size_t K, const PenaltyConfig& penalties, double beta,
              const SegmentPlan& plan, const MhrdOptions& opts = {});
RidgeSet mhrd(const Tfr& R, std::size_t K, const PenaltyConfig& penalties, double beta, const SegmentPlan& plan,
              const MhrdOptions& opts = {});

struct ModifiedRdOptions {
    int exponent = 1;
    // When set, restricts h(l) to |h(l) - k c1(l)| <= beta c1(l).
    std::optional<double> beta;
};

// Exact maximiser of the fundamental-conditioned single-curve objective for harmonic k >= 2.
Ridge modified_single_rd(const NormalizedTfr& R, const Ridge& c1, int k, double lambda_k, double mu_k,
                         const ModifiedRdOptions& opts = {});
Ridge modified_single_rd(const Tfr& R, const Ridge& c1, int k, double lambda_k, double mu_k,
                         const ModifiedRdOptions& opts = {});

// Row 1 = c1_star; rows 2..K from independent band-restricted modified programs.
RidgeSet mhrd_conditioned(const NormalizedTfr& R, const Ridge& c1_star, std::size_t K,
                          const PenaltyConfig& penalties, double beta, int exponent = 1);
RidgeSet mhrd_conditioned(const Tfr& R, const Ridge& c1_star, std::size_t K, const PenaltyConfig& penalties,
                          double beta, int exponent = 1);

// Sum over rows 2..K of the conditioned objectives (the quantity mhrd_conditioned maximises).
double conditioned_objective(const NormalizedTfr& R, const RidgeSet& c, const PenaltyConfig& penalties,
                             int exponent = 1);

}  // namespace ridgekit
