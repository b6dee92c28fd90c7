#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

struct ComplexComponent {
    std::vector<cplx> values;
    Ridge source_ridge;
    std::size_t empty_band_samples = 0;  // times where the band missed the axis (value 0 there)
};

// (2 dt / h(K+1)) * dxi * sum of S(l, q) over bins with |q - c(l)| dxi < delta.
// The leading factor turns the squeezed STFT sum into a e^{2 pi i phi} for a
// component a cos(2 pi phi).
ComplexComponent reconstruct_component(const Tfr& S, const Ridge& c, double delta_hz);

// Unwrapped phase in cycles. Zero-magnitude samples are filled by linear
// interpolation of the phase across the gap.
std::vector<double> phase_unwrap(const ComplexComponent& x);
std::vector<double> phase_unwrap(const std::vector<cplx>& x);

struct ImtEstimate {
    std::vector<double> fundamental_phase;             // cycles
    std::vector<std::vector<double>> harmonic_amps;    // D series
    std::vector<std::vector<double>> harmonic_phases;  // D series, cycles
    std::vector<double> composite;
    std::size_t D = 0;
};

// Least-squares fit of sum_j A_j(t) cos(2 pi j phi1) + B_j(t) sin(2 pi j phi1)
// with A_j, B_j in a cubic B-spline basis of n_knots uniform knots.
ImtEstimate samd_fit(const Signal& f, const std::vector<double>& phi1, std::size_t D, std::size_t n_knots);

// Indices sorting RidgeSets by the time mean of their fundamental row (ties: first sample).
std::vector<std::size_t> ridge_ordering(const std::vector<RidgeSet>& ridges);

// Default reconstruction bandwidth: 0.2 x the mean fundamental frequency, at least 3 bins.
double default_delta(const Ridge& fundamental);

struct TfrConfig {
    std::size_t window_half_length = 0;  // K; 0 derives it from window_cycles at nominal_hz
    double window_cycles = 10.0;
    double nominal_hz = 2.0;
    double sigma = 0.15;
    double dxi_hz = 0.1;
    double max_hz = 0.0;  // keep bins up to this frequency (0 = Nyquist)

    WindowPair window(double fs) const;
    TfrOptions options(double fs) const;
};

struct SamdMhrdConfig {
    std::size_t L = 1;
    std::size_t I = 1;
    std::size_t K = 3;
    std::vector<std::size_t> D;  // harmonic order per IMT (default K each)
    PenaltyConfig penalties;     // empty lambda -> lambda_schedule(1, 0.1, K)
    double beta = 0.0625;
    std::optional<SegmentPlan> plan;      // default_plan(segment_s, band_hz) when unset
    double segment_s = 1.0;
    double band_hz = 1.0;
    std::optional<double> delta_hz;       // default_delta when unset
    std::size_t n_knots = 0;              // 0 -> one knot per 2 seconds (at least 4)
    int mhrd_exponent = 2;
    int conditioned_exponent = 1;
    TfrConfig tfr;
    // Detect all L ridge sets of an iteration on the same input before any
    // subtraction (the input is then f0 minus the last fitted IMT). Off by
    // default: each detection then runs on the input minus the IMTs fitted so far.
    bool literal_passes = false;
    // Optional bounds (Hz) on the fundamental search.
    std::optional<double> fundamental_min_hz;
    std::optional<double> fundamental_max_hz;
};

struct DecompositionResult {
    // estimates[i][l]: IMT l after iteration i.
    std::vector<std::vector<ImtEstimate>> estimates;
    std::vector<RidgeSet> ridges;  // final ridges, one set per IMT
    std::vector<double> residual;
    double fs = 1.0;
    double t0 = 0.0;
    std::vector<double> delta_hz;  // reconstruction bandwidth used per IMT

    const std::vector<ImtEstimate>& final_estimates() const { return estimates.back(); }
};

DecompositionResult samd_mhrd(const Signal& f, const SamdMhrdConfig& cfg);

// One CSV per IMT (time, composite, amp_1.., phase_1..), residual.csv and ridges_<l>.csv.
// Returns the written paths.
std::vector<std::string> export_decomposition(const DecompositionResult& r, const std::string& dir,
                                              const std::string& stem);

}  // namespace ridgekit
