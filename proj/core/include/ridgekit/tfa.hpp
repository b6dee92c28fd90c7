#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "ridgekit/grid.hpp"

namespace ridgekit {

using cplx = std::complex<double>;

// Uniformly sampled real series.
struct Signal {
    std::vector<double> samples;
    double fs = 1.0;  // Hz
    double t0 = 0.0;  // seconds

    Signal() = default;
    Signal(std::vector<double> x, double fs_hz, double t0_s = 0.0);

    std::size_t size() const noexcept { return samples.size(); }
    double dt() const noexcept { return 1.0 / fs; }
    double time(std::size_t n) const noexcept { return t0 + static_cast<double>(n) / fs; }

    // Throws InvalidParameter when empty, non-finite, or fs is not positive.
    void validate() const;
};

// Discretised window and its derivative over the normalised support [-0.5, 0.5].
struct WindowPair {
    std::vector<double> h;
    std::vector<double> dh;  // derivative with respect to the normalised time u
    std::size_t K = 0;       // half length in samples; length is 2K+1
    double sigma = 0.0;

    double center() const { return h[K]; }
};

// h(k) = exp(-u_k^2 / (2 sigma^2)), u_k = k/(2K) - 0.5 for k = 0..2K.
WindowPair gaussian_window(std::size_t K, double sigma);

// Half length so that the window spans `cycles` periods of `nominal_hz`.
std::size_t half_length_for_cycles(double fs, double nominal_hz, double cycles = 10.0);

enum class TfrKind { Stft, Sst1, Sst2 };

const char* to_string(TfrKind kind);

// Complex time-frequency representation. Column c holds frequency bin c+1,
// i.e. (c+1) * dxi Hz. `cols()` may be smaller than `total_bins` when the
// representation was cut at a maximum frequency.
struct Tfr {
    Grid<cplx> values;
    double dt = 1.0;
    double dxi = 1.0;
    double t0 = 0.0;
    TfrKind kind = TfrKind::Stft;
    std::size_t total_bins = 0;          // M; dxi = fs / (2M)
    std::size_t window_half_length = 0;  // K of the analysis window
    double window_center = 1.0;          // h(K+1), used by reconstruction

    std::size_t rows() const noexcept { return values.rows(); }
    std::size_t cols() const noexcept { return values.cols(); }
    double frequency_of_bin(int bin) const noexcept { return bin * dxi; }
    double max_abs() const;
};

// Frequency-reassignment offsets in bins; NaN marks "undefined" (|V| <= threshold).
struct ReassignmentMap {
    Grid<double> omega;
    double threshold = 0.0;

    bool defined(std::size_t n, std::size_t m) const;
};

struct TfrOptions {
    std::size_t bins = 0;      // M, bins up to Nyquist
    std::size_t max_bins = 0;  // keep only bins 1..max_bins (0 = all)
    std::optional<double> threshold;  // upsilon; default 10 * eps * max|V|
};

// Bin count M for a desired frequency step.
std::size_t bins_for_resolution(double fs, double dxi_hz);

// Bin index (1-based) nearest to a frequency in Hz.
int bin_of_frequency(double hz, double dxi);

// Discretised STFT with zero extension at both edges. The phase is referenced
// to the window centre: V(n,m) = sum_k f(n+k-K) h(k) exp(-i 2 pi (k-K) m / (2M)).
Tfr stft(const Signal& signal, const WindowPair& window, std::size_t M, std::size_t max_bins = 0);

// STFT using an arbitrary window sampled on the same grid as `window.h`.
Tfr stft_with(const Signal& signal, const std::vector<double>& taps, std::size_t M,
              std::size_t max_bins = 0);

// Default reassignment threshold: 10 * machine epsilon * max|V|.
double default_threshold(const Tfr& V);

// omega(n,m) = (M / (2 pi K)) Im(Vd/V); a coefficient at bin m is squeezed to m - round(omega).
ReassignmentMap reassignment_operator(const Tfr& V, const Tfr& Vd, double threshold);

// First-order synchrosqueezing of a full-band STFT.
Tfr sst1(const Tfr& V, const ReassignmentMap& map);

// STFT -> reassignment -> squeeze in one pass, honouring opts.max_bins.
Tfr sst1(const Signal& signal, const WindowPair& window, const TfrOptions& opts);

// Second-order synchrosqueezing (chirp-corrected reassignment).
Tfr sst2(const Signal& signal, const WindowPair& window, const TfrOptions& opts);

// Convenience overload matching sst2(signal, window, M, threshold).
Tfr sst2(const Signal& signal, const WindowPair& window, std::size_t M,
         std::optional<double> threshold = std::nullopt);

// Squared magnitudes (spectrogram) as a real grid.
Grid<double> spectrogram(const Tfr& V);

// Round half away from zero.
long round_half_away(double x);

}  // namespace ridgekit
