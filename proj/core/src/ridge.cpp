#include "ridgekit/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "joint_dp.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/path_dp.hpp"

namespace ridgekit {

namespace {

constexpr double kBandSlack = 1e-9;

Ridge make_ridge(const NormalizedTfr& R, std::vector<int> bins) {
    Ridge r;
    r.bins = std::move(bins);
    r.dt = R.dt;
    r.dxi = R.dxi;
    r.t0 = R.t0;
    return r;
}

void check_ridge(const NormalizedTfr& R, const Ridge& c, const char* what) {
    if (c.size() != R.rows())
        throw InvalidParameter(std::string(what) + ": ridge length does not match the TFR time axis");
    const int M = static_cast<int>(R.cols());
    for (int b : c.bins)
        if (b < 1 || b > M) throw InvalidParameter(std::string(what) + ": ridge bin out of range");
}

Grid<double> score_grid(const NormalizedTfr& R, int exponent) {
    Grid<double> s(R.rows(), R.cols());
    const auto& src = R.values.data();
    auto& dst = s.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = entry_score(src[i], exponent);
    return s;
}

void check_exponent(int e) {
    if (e != 1 && e != 2) throw InvalidParameter("magnitude exponent must be 1 or 2");
}

double penalty(const std::vector<int>& path) {
    double acc = 0.0;
    for (std::size_t l = 1; l < path.size(); ++l) {
        const double d = path[l] - path[l - 1];
        acc += d * d;
    }
    return acc;
}

}  // namespace

double Ridge::mean_bin() const {
    if (bins.empty()) return 0.0;
    return std::accumulate(bins.begin(), bins.end(), 0.0) / static_cast<double>(bins.size());
}

void SegmentPlan::validate(std::size_t N) const {
    if (breakpoints.size() < 2 || breakpoints.front() != 0 || breakpoints.back() != N)
        throw InvalidParameter("segment plan must start at 0 and end at N");
    for (std::size_t q = 1; q < breakpoints.size(); ++q)
        if (breakpoints[q] <= breakpoints[q - 1]) throw InvalidParameter("segment breakpoints must increase strictly");
    if (half_widths.size() != breakpoints.size() - 1)
        throw InvalidParameter("segment plan needs one half-width per segment");
    for (int b : half_widths)
        if (b < 1) throw InvalidParameter("segment half-widths must be >= 1 bin");
}

SegmentPlan default_plan(std::size_t N, double dt, double dxi, double segment_s, double band_hz) {
    if (N == 0 || !(dt > 0) || !(dxi > 0) || !(segment_s > 0) || !(band_hz > 0))
        throw InvalidParameter("default_plan needs positive sizes");
    const auto len = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(segment_s / dt)));
    const int B = std::max(1, static_cast<int>(std::ceil(band_hz / dxi - 1e-9)));
    SegmentPlan plan;
    for (std::size_t t = 0; t < N; t += len) plan.breakpoints.push_back(t);
    plan.breakpoints.push_back(N);
    plan.half_widths.assign(plan.breakpoints.size() - 1, B);
    return plan;
}

SegmentPlan single_segment_plan(std::size_t N) {
    if (N == 0) throw InvalidParameter("single_segment_plan needs N >= 1");
    return SegmentPlan{{0, N}, {1}};
}

void PenaltyConfig::validate(std::size_t K) const {
    if (lambda.size() != K) throw InvalidParameter("penalty config needs one lambda per harmonic");
    if (!mu.empty() && mu.size() != K) throw InvalidParameter("penalty config needs zero or K mu values");
    for (double v : lambda)
        if (!(v >= 0) || !std::isfinite(v)) throw InvalidParameter("smoothness penalties must be finite and >= 0");
    for (double v : mu)
        if (!(v >= 0) || !std::isfinite(v)) throw InvalidParameter("similarity penalties must be finite and >= 0");
}

NormalizedTfr normalize_tfr(const Tfr& R) {
    if (R.rows() == 0 || R.cols() == 0) throw DegenerateInput("empty TFR");
    double total = 0.0;
    for (const cplx& v : R.values.data()) total += std::abs(v);
    if (!(total > 0) || !std::isfinite(total)) throw DegenerateInput("TFR magnitudes sum to zero");
    const double floor = std::log(std::numeric_limits<double>::epsilon());
    NormalizedTfr out;
    out.values = Grid<double>(R.rows(), R.cols());
    out.dt = R.dt;
    out.dxi = R.dxi;
    out.t0 = R.t0;
    const auto& src = R.values.data();
    auto& dst = out.values.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double a = std::abs(src[i]);
        dst[i] = a > 0 ? std::max(std::log(a / total), floor) : floor;
    }
    return out;
}

double entry_score(double normalized, int exponent) {
    switch (exponent) {
        case 1:
            return normalized;
        case 2:
            return -normalized * normalized;
        default:
            throw InvalidParameter("magnitude exponent must be 1 or 2");
    }
}

double single_objective(const NormalizedTfr& R, const Ridge& c, double lambda, int exponent) {
    check_ridge(R, c, "single_objective");
    double acc = 0.0;
    for (std::size_t l = 0; l < c.size(); ++l)
        acc += entry_score(R.values(l, static_cast<std::size_t>(c.bins[l] - 1)), exponent);
    return acc - lambda * penalty(c.bins);
}

double modified_objective(const NormalizedTfr& R, const Ridge& h, const Ridge& c1, int k, double lambda, double mu,
                          int exponent) {
    check_ridge(R, c1, "modified_objective");
    double acc = single_objective(R, h, lambda, exponent);
    for (std::size_t l = 0; l < h.size(); ++l) {
        const double d = h.bins[l] - static_cast<double>(k) * c1.bins[l];
        acc -= mu * d * d;
    }
    return acc;
}

double mhrd_objective(const NormalizedTfr& R, const RidgeSet& c, std::span<const double> lambda, int exponent) {
    if (lambda.size() != c.harmonics()) throw InvalidParameter("mhrd_objective needs one lambda per row");
    double acc = 0.0;
    for (std::size_t k = 0; k < c.harmonics(); ++k) acc += single_objective(R, c.rows[k], lambda[k], exponent);
    return acc;
}

bool in_harmonic_band(int x, int k, int c1, double beta) {
    return std::abs(static_cast<double>(x) - static_cast<double>(k) * c1) <= beta * c1 + kBandSlack;
}

bool satisfies_band(const RidgeSet& c, double beta) {
    if (c.rows.empty()) return true;
    const Ridge& f = c.rows.front();
    for (std::size_t k = 1; k < c.rows.size(); ++k) {
        if (c.rows[k].size() != f.size()) return false;
        for (std::size_t l = 0; l < f.size(); ++l)
            if (!in_harmonic_band(c.rows[k].bins[l], static_cast<int>(k + 1), f.bins[l], beta)) return false;
    }
    return true;
}

Ridge single_rd(const NormalizedTfr& R, double lambda1, const SingleRdOptions& opts) {
    if (!(lambda1 >= 0)) throw InvalidParameter("lambda1 must be >= 0");
    const std::size_t N = R.rows();
    const int M = static_cast<int>(R.cols());
    ChainProblem p;
    p.lo.assign(N, 1);
    p.hi.assign(N, M);
    p.lambda = lambda1;
    const int e = opts.exponent;
    check_exponent(e);
    p.unary = [&](std::size_t l, int b) { return entry_score(R.values(l, static_cast<std::size_t>(b - 1)), e); };
    return make_ridge(R, solve_chain(p).path);
}

Ridge single_rd(const Tfr& R, double lambda1, const SingleRdOptions& opts) {
    return single_rd(normalize_tfr(R), lambda1, opts);
}

Tfr mask_tfr(const Tfr& R, const Ridge& c, std::span<const int> eta_minus, std::span<const int> eta_plus) {
    const std::size_t N = R.rows();
    if (c.size() != N || eta_minus.size() != N || eta_plus.size() != N)
        throw InvalidParameter("mask_tfr: ridge and bandwidths must match the time axis");
    Tfr out = R;
    const long M = static_cast<long>(R.cols());
    for (std::size_t n = 0; n < N; ++n) {
        if (eta_minus[n] < 0 || eta_plus[n] < 0) throw InvalidParameter("mask_tfr: bandwidths must be >= 0");
        const long lo = std::max<long>(1, static_cast<long>(c.bins[n]) - eta_minus[n]);
        const long hi = std::min<long>(M, static_cast<long>(c.bins[n]) + eta_plus[n]);
        for (long b = lo; b <= hi; ++b) out.values(n, static_cast<std::size_t>(b - 1)) = cplx{};
    }
    return out;
}

Tfr mask_ridges(const Tfr& R, const RidgeSet& c, int half_width) {
    std::vector<int> eta(R.rows(), half_width);
    Tfr out = R;
    for (const Ridge& r : c.rows) out = mask_tfr(out, r, eta, eta);
    return out;
}

RidgeSet mhrd(const NormalizedTfr& R, std::size_t K, const PenaltyConfig& penalties, double beta,
              const SegmentPlan& plan, const MhrdOptions& opts) {
    if (K < 1) throw InvalidParameter("mhrd needs K >= 1");
    if (!(beta >= 0.0 && beta < 0.5)) throw InvalidParameter("beta must lie in [0, 1/2)");
    penalties.validate(K);
    const std::size_t N = R.rows();
    plan.validate(N);
    const int M = static_cast<int>(R.cols());
    const Grid<double> scores = score_grid(R, opts.exponent);
    const int fmin = opts.fundamental_min.value_or(1);
    const int fmax = opts.fundamental_max.value_or(M);

    std::vector<std::vector<int>> tuples(N);
    for (std::size_t q = 0; q < plan.segments(); ++q) {
        detail::JointSegment seg;
        seg.scores = &scores;
        seg.K = K;
        seg.M = M;
        seg.beta = beta;
        seg.lambda = penalties.lambda;
        seg.row_end = plan.breakpoints[q + 1];
        if (q == 0) {
            seg.row_begin = 0;
            seg.c1_lo = fmin;
            seg.c1_hi = fmax;
        } else {
            seg.row_begin = plan.breakpoints[q] - 1;
            seg.pinned = tuples[seg.row_begin];
            const int centre = seg.pinned.front();
            seg.c1_lo = std::max(fmin, centre - plan.half_widths[q]);
            seg.c1_hi = std::min(fmax, centre + plan.half_widths[q]);
        }
        auto rows = detail::solve_joint_segment(seg);
        const std::size_t skip = q == 0 ? 0 : 1;
        for (std::size_t i = skip; i < rows.size(); ++i) tuples[seg.row_begin + i] = std::move(rows[i]);
    }

    RidgeSet out;
    out.beta = beta;
    out.rows.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<int> bins(N);
        for (std::size_t l = 0; l < N; ++l) bins[l] = tuples[l][k];
        out.rows[k] = make_ridge(R, std::move(bins));
    }
    return out;
}

RidgeSet mhrd(const Tfr& R, std::size_t K, const PenaltyConfig& penalties, double beta, const SegmentPlan& plan,
              const MhrdOptions& opts) {
    return mhrd(normalize_tfr(R), K, penalties, beta, plan, opts);
}

Ridge modified_single_rd(const NormalizedTfr& R, const Ridge& c1, int k, double lambda_k, double mu_k,
                         const ModifiedRdOptions& opts) {
    if (k < 2) throw InvalidParameter("modified_single_rd needs harmonic index k >= 2");
    if (!(lambda_k >= 0) || !(mu_k >= 0)) throw InvalidParameter("penalties must be >= 0");
    check_ridge(R, c1, "modified_single_rd");
    const std::size_t N = R.rows();
    const int M = static_cast<int>(R.cols());
    ChainProblem p;
    p.lo.assign(N, 1);
    p.hi.assign(N, M);
    if (opts.beta) {
        for (std::size_t l = 0; l < N; ++l) {
            const auto b = detail::harmonic_band(k, c1.bins[l], *opts.beta, M);
            if (b.lo > b.hi)
                throw Infeasible(l, k,
                                 "harmonic band lies outside the frequency axis (time index " + std::to_string(l) +
                                     ", harmonic " + std::to_string(k) + ")");
            p.lo[l] = b.lo;
            p.hi[l] = b.hi;
        }
    }
    p.lambda = lambda_k;
    const int e = opts.exponent;
    check_exponent(e);
    p.unary = [&](std::size_t l, int h) {
        const double d = h - static_cast<double>(k) * c1.bins[l];
        return entry_score(R.values(l, static_cast<std::size_t>(h - 1)), e) - mu_k * d * d;
    };
    return make_ridge(R, solve_chain(p).path);
}

Ridge modified_single_rd(const Tfr& R, const Ridge& c1, int k, double lambda_k, double mu_k,
                         const ModifiedRdOptions& opts) {
    return modified_single_rd(normalize_tfr(R), c1, k, lambda_k, mu_k, opts);
}

RidgeSet mhrd_conditioned(const NormalizedTfr& R, const Ridge& c1_star, std::size_t K, const PenaltyConfig& penalties,
                          double beta, int exponent) {
    if (K < 1) throw InvalidParameter("mhrd_conditioned needs K >= 1");
    if (!(beta >= 0.0 && beta < 0.5)) throw InvalidParameter("beta must lie in [0, 1/2)");
    penalties.validate(K);
    check_ridge(R, c1_star, "mhrd_conditioned");
    RidgeSet out;
    out.beta = beta;
    out.rows.push_back(make_ridge(R, c1_star.bins));
    ModifiedRdOptions opts;
    opts.exponent = exponent;
    opts.beta = beta;
    for (std::size_t k = 2; k <= K; ++k) {
        const double mu = penalties.mu.empty() ? 0.0 : penalties.mu[k - 1];
        out.rows.push_back(
            modified_single_rd(R, c1_star, static_cast<int>(k), penalties.lambda[k - 1], mu, opts));
    }
    return out;
}

RidgeSet mhrd_conditioned(const Tfr& R, const Ridge& c1_star, std::size_t K, const PenaltyConfig& penalties,
                          double beta, int exponent) {
    return mhrd_conditioned(normalize_tfr(R), c1_star, K, penalties, beta, exponent);
}

double conditioned_objective(const NormalizedTfr& R, const RidgeSet& c, const PenaltyConfig& penalties,
                             int exponent) {
    penalties.validate(c.harmonics());
    double acc = 0.0;
    for (std::size_t k = 2; k <= c.harmonics(); ++k) {
        const double mu = penalties.mu.empty() ? 0.0 : penalties.mu[k - 1];
        acc += modified_objective(R, c.rows[k - 1], c.rows[0], static_cast<int>(k), penalties.lambda[k - 1], mu,
                                  exponent);
    }
    return acc;
}

}  // namespace ridgekit
