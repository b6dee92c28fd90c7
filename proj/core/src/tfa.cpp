#include "ridgekit/tfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// plain complex arithmetic without the C99 inf/nan recovery paths; operands are finite here
inline cplx mul(cplx a, cplx b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline cplx inv(cplx a) {
    const double d = a.real() * a.real() + a.imag() * a.imag();
    return {a.real() / d, -a.imag() / d};
}

// Computes, for one time index, the STFT rows of up to several real windows
// over all bins 1..M. Windows are processed two at a time through a single
// complex FFT of length 2M (real/imaginary packing).
class RowStft {
public:
    RowStft(const Signal& signal, std::vector<const std::vector<double>*> taps, std::size_t M)
        : signal_(signal), taps_(std::move(taps)), M_(M), fft_(2 * M) {
        out_.assign(taps_.size(), std::vector<cplx>(M + 1));
        // FFT slot of each tap, phase referenced to the window centre
        const std::size_t L = taps_.front()->size();
        const auto K = static_cast<long>((L - 1) / 2);
        const auto P = static_cast<long>(2 * M);
        slot_.resize(L);
        for (std::size_t k = 0; k < L; ++k) {
            const long s = (static_cast<long>(k) - K) % P;
            slot_[k] = static_cast<std::size_t>(s < 0 ? s + P : s);
        }
    }

    // out(w)[m] for m = 1..M; index 0 unused.
    const std::vector<cplx>& out(std::size_t w) const { return out_[w]; }

    void compute(std::size_t n) {
        for (std::size_t w = 0; w < taps_.size(); w += 2) {
            const std::vector<double>& a = *taps_[w];
            const std::vector<double>* b = (w + 1 < taps_.size()) ? taps_[w + 1] : nullptr;
            load(n, a, b);
            fft_.execute();
            unpack(w, b != nullptr);
        }
    }

private:
    void load(std::size_t n, const std::vector<double>& a, const std::vector<double>* b) {
        const std::size_t L = a.size();
        const std::size_t K = (L - 1) / 2;
        const std::size_t P = 2 * M_;
        cplx* z = fft_.data();
        std::fill(z, z + P, cplx{});
        const auto N = static_cast<long>(signal_.size());
        for (std::size_t k = 0; k < L; ++k) {
            const long idx = static_cast<long>(n) + static_cast<long>(k) - static_cast<long>(K);
            if (idx < 0 || idx >= N) continue;
            const double f = signal_.samples[static_cast<std::size_t>(idx)];
            const double re = f * a[k];
            const double im = b ? f * (*b)[k] : 0.0;
            z[slot_[k]] += cplx(re, im);
        }
    }

    void unpack(std::size_t w, bool pair) {
        const std::size_t P = 2 * M_;
        const cplx* Z = fft_.data();
        for (std::size_t m = 1; m <= M_; ++m) {
            const cplx zm = Z[m];
            if (!pair) {
                out_[w][m] = zm;
                continue;
            }
            const cplx zc = std::conj(Z[(P - m) % P]);
            out_[w][m] = 0.5 * (zm + zc);
            out_[w + 1][m] = cplx(0.0, -0.5) * (zm - zc);
        }
    }

    const Signal& signal_;
    std::vector<const std::vector<double>*> taps_;
    std::size_t M_;
    std::vector<std::size_t> slot_;
    detail::ForwardFft fft_;
    std::vector<std::vector<cplx>> out_;
};

void check_M(std::size_t M) {
    if (M < 1) throw InvalidParameter("frequency-bin count M must be >= 1");
}

std::size_t kept_bins(std::size_t M, std::size_t max_bins) {
    return (max_bins == 0) ? M : std::min(M, max_bins);
}

Tfr empty_like(const Signal& s, std::size_t M, std::size_t cols, TfrKind kind, const WindowPair* w) {
    Tfr out;
    out.values = Grid<cplx>(s.size(), cols);
    out.dt = s.dt();
    out.dxi = s.fs / (2.0 * static_cast<double>(M));
    out.t0 = s.t0;
    out.kind = kind;
    out.total_bins = M;
    if (w) {
        out.window_half_length = w->K;
        out.window_center = w->center();
    }
    return out;
}

void check_window(const WindowPair& w) {
    if (w.K < 1 || w.h.size() != 2 * w.K + 1 || w.dh.size() != w.h.size())
        throw InvalidParameter("window must have 2K+1 taps with K >= 1");
}

double max_stft_magnitude(const Signal& signal, const WindowPair& window, std::size_t M) {
    std::vector<double> row_max(signal.size(), 0.0);
    parallel_for(signal.size(), [&](std::size_t begin, std::size_t end) {
        RowStft rows(signal, {&window.h}, M);
        for (std::size_t n = begin; n < end; ++n) {
            rows.compute(n);
            double mx = 0.0;
            for (std::size_t m = 1; m <= M; ++m) mx = std::max(mx, std::abs(rows.out(0)[m]));
            row_max[n] = mx;
        }
    });
    return *std::max_element(row_max.begin(), row_max.end());
}

}  // namespace

Signal::Signal(std::vector<double> x, double fs_hz, double t0_s)
    : samples(std::move(x)), fs(fs_hz), t0(t0_s) {}

void Signal::validate() const {
    if (samples.empty()) throw InvalidParameter("signal has no samples");
    if (!std::isfinite(fs) || fs <= 0.0) throw InvalidParameter("sampling rate must be finite and positive");
    for (double v : samples)
        if (!std::isfinite(v)) throw InvalidParameter("signal contains non-finite samples");
}

WindowPair gaussian_window(std::size_t K, double sigma) {
    if (K < 1) throw InvalidParameter("window half-length K must be >= 1");
    if (!(sigma > 0.0)) throw InvalidParameter("window sigma must be > 0");
    WindowPair w;
    w.K = K;
    w.sigma = sigma;
    w.h.resize(2 * K + 1);
    w.dh.resize(2 * K + 1);
    const double s2 = sigma * sigma;
    for (std::size_t k = 0; k <= 2 * K; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(2 * K) - 0.5;
        w.h[k] = std::exp(-u * u / (2.0 * s2));
        w.dh[k] = -u * w.h[k] / s2;
    }
    // exact zero at the centre
    w.dh[K] = 0.0;
    return w;
}

std::size_t half_length_for_cycles(double fs, double nominal_hz, double cycles) {
    if (!(fs > 0.0) || !(nominal_hz > 0.0) || !(cycles > 0.0))
        throw InvalidParameter("fs, nominal frequency and cycle count must be positive");
    const double span = cycles / nominal_hz * fs;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(span / 2.0)));
}

const char* to_string(TfrKind kind) {
    switch (kind) {
        case TfrKind::Stft: return "stft";
        case TfrKind::Sst1: return "sst1";
        case TfrKind::Sst2: return "sst2";
    }
    return "unknown";
}

double Tfr::max_abs() const {
    double mx = 0.0;
    for (const auto& v : values.data()) mx = std::max(mx, std::abs(v));
    return mx;
}

bool ReassignmentMap::defined(std::size_t n, std::size_t m) const { return !std::isnan(omega(n, m)); }

std::size_t bins_for_resolution(double fs, double dxi_hz) {
    if (!(fs > 0.0) || !(dxi_hz > 0.0)) throw InvalidParameter("fs and frequency step must be positive");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fs / (2.0 * dxi_hz))));
}

int bin_of_frequency(double hz, double dxi) { return static_cast<int>(std::lround(hz / dxi)); }

long round_half_away(double x) { return std::lround(x); }

Tfr stft(const Signal& signal, const WindowPair& window, std::size_t M, std::size_t max_bins) {
    check_window(window);
    Tfr out = stft_with(signal, window.h, M, max_bins);
    out.window_half_length = window.K;
    out.window_center = window.center();
    return out;
}

Tfr stft_with(const Signal& signal, const std::vector<double>& taps, std::size_t M, std::size_t max_bins) {
    signal.validate();
    check_M(M);
    if (taps.empty() || taps.size() % 2 == 0) throw InvalidParameter("window must have odd length 2K+1");
    const std::size_t cols = kept_bins(M, max_bins);
    Tfr out = empty_like(signal, M, cols, TfrKind::Stft, nullptr);
    out.window_half_length = (taps.size() - 1) / 2;
    out.window_center = taps[out.window_half_length];
    parallel_for(signal.size(), [&](std::size_t begin, std::size_t end) {
        RowStft rows(signal, {&taps}, M);
        for (std::size_t n = begin; n < end; ++n) {
            rows.compute(n);
            auto dst = out.values.row(n);
            for (std::size_t c = 0; c < cols; ++c) dst[c] = rows.out(0)[c + 1];
        }
    });
    return out;
}

double default_threshold(const Tfr& V) {
    return 10.0 * std::numeric_limits<double>::epsilon() * V.max_abs();
}

ReassignmentMap reassignment_operator(const Tfr& V, const Tfr& Vd, double threshold) {
    if (V.rows() != Vd.rows() || V.cols() != Vd.cols())
        throw InvalidParameter("reassignment_operator: STFT shapes differ");
    if (!(threshold > 0.0)) throw InvalidParameter("reassignment threshold must be > 0");
    if (V.window_half_length < 1) throw InvalidParameter("STFT carries no window half-length");
    const double scale = static_cast<double>(V.total_bins) /
                         (kTwoPi * static_cast<double>(V.window_half_length));
    ReassignmentMap map;
    map.threshold = threshold;
    map.omega = Grid<double>(V.rows(), V.cols(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t n = 0; n < V.rows(); ++n) {
        for (std::size_t m = 0; m < V.cols(); ++m) {
            const cplx v = V.values(n, m);
            if (std::abs(v) > threshold) map.omega(n, m) = scale * std::imag(Vd.values(n, m) / v);
        }
    }
    return map;
}

Tfr sst1(const Tfr& V, const ReassignmentMap& map) {
    if (map.omega.rows() != V.rows() || map.omega.cols() != V.cols())
        throw InvalidParameter("sst1: reassignment map shape differs from STFT");
    Tfr S = V;
    S.kind = TfrKind::Sst1;
    std::fill(S.values.data().begin(), S.values.data().end(), cplx{});
    const auto cols = static_cast<long>(V.cols());
    for (std::size_t n = 0; n < V.rows(); ++n) {
        for (std::size_t l = 0; l < V.cols(); ++l) {
            if (!map.defined(n, l)) continue;
            // bins are 1-based: source bin l+1 goes to (l+1) - round(omega)
            const long target = static_cast<long>(l) + 1 - round_half_away(map.omega(n, l));
            if (target < 1 || target > cols) continue;
            S.values(n, static_cast<std::size_t>(target - 1)) += V.values(n, l);
        }
    }
    return S;
}

Tfr sst1(const Signal& signal, const WindowPair& window, const TfrOptions& opts) {
    signal.validate();
    check_window(window);
    const std::size_t M = opts.bins;
    check_M(M);
    const double threshold = opts.threshold ? *opts.threshold
                                            : 10.0 * std::numeric_limits<double>::epsilon() *
                                                  max_stft_magnitude(signal, window, M);
    const std::size_t cols = kept_bins(M, opts.max_bins);
    Tfr S = empty_like(signal, M, cols, TfrKind::Sst1, &window);
    const double scale = static_cast<double>(M) / (kTwoPi * static_cast<double>(window.K));
    parallel_for(signal.size(), [&](std::size_t begin, std::size_t end) {
        RowStft rows(signal, {&window.h, &window.dh}, M);
        for (std::size_t n = begin; n < end; ++n) {
            rows.compute(n);
            const auto& V = rows.out(0);
            const auto& Vd = rows.out(1);
            auto dst = S.values.row(n);
            for (std::size_t m = 1; m <= M; ++m) {
                if (!(std::abs(V[m]) > threshold)) continue;
                const double omega = scale * std::imag(Vd[m] / V[m]);
                const long target = static_cast<long>(m) - round_half_away(omega);
                if (target < 1 || target > static_cast<long>(cols)) continue;
                dst[static_cast<std::size_t>(target - 1)] += V[m];
            }
        }
    });
    return S;
}

Tfr sst2(const Signal& signal, const WindowPair& window, const TfrOptions& opts) {
    signal.validate();
    check_window(window);
    if (!(window.sigma > 0.0)) throw InvalidParameter("sst2 needs a Gaussian window (sigma > 0)");
    const std::size_t M = opts.bins;
    check_M(M);
    const std::size_t K = window.K;
    const std::size_t L = 2 * K + 1;
    const double s2 = window.sigma * window.sigma;

    // Auxiliary windows in normalised time u: g'' and u*g, u*g'.
    std::vector<double> g2(L), ug(L), ug1(L);
    for (std::size_t k = 0; k < L; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(2 * K) - 0.5;
        const double g = window.h[k];
        g2[k] = (u * u / (s2 * s2) - 1.0 / s2) * g;
        ug[k] = u * g;
        ug1[k] = u * window.dh[k];
    }

    const double threshold = opts.threshold ? *opts.threshold
                                            : 10.0 * std::numeric_limits<double>::epsilon() *
                                                  max_stft_magnitude(signal, window, M);
    const std::size_t cols = kept_bins(M, opts.max_bins);
    Tfr S = empty_like(signal, M, cols, TfrKind::Sst2, &window);
    // bins per (cycle per unit of u)
    const double to_bins = static_cast<double>(M) / static_cast<double>(K);
    const double thr2 = threshold * threshold;

    parallel_for(signal.size(), [&](std::size_t begin, std::size_t end) {
        RowStft rows(signal, {&window.h, &window.dh, &g2, &ug, &ug1}, M);
        for (std::size_t n = begin; n < end; ++n) {
            rows.compute(n);
            const auto& Vg = rows.out(0);
            const auto& Vg1 = rows.out(1);
            const auto& Vg2 = rows.out(2);
            const auto& Vug = rows.out(3);
            const auto& Vug1 = rows.out(4);
            auto dst = S.values.row(n);
            for (std::size_t m = 1; m <= M; ++m) {
                const cplx v = Vg[m];
                const double mag2 = std::norm(v);
                if (!(mag2 > thr2)) continue;
                const cplx iv = inv(v);
                double offset = to_bins * mul(Vg1[m], iv).imag() / kTwoPi;
                const cplx det = mul(v, Vug1[m]) - mul(Vug[m], Vg1[m]);
                if (std::norm(det) > thr2 * mag2) {
                    const cplx chirp = mul(mul(v, Vg2[m]) - mul(Vg1[m], Vg1[m]), inv(det));
                    const cplx delay = mul(Vug[m], iv);
                    offset -= to_bins * mul(chirp, delay).imag() / kTwoPi;
                }
                const long target = static_cast<long>(m) - round_half_away(offset);
                if (target < 1 || target > static_cast<long>(cols)) continue;
                dst[static_cast<std::size_t>(target - 1)] += v;
            }
        }
    });
    return S;
}

Tfr sst2(const Signal& signal, const WindowPair& window, std::size_t M, std::optional<double> threshold) {
    TfrOptions opts;
    opts.bins = M;
    opts.threshold = threshold;
    return sst2(signal, window, opts);
}

Grid<double> spectrogram(const Tfr& V) {
    Grid<double> out(V.rows(), V.cols());
    for (std::size_t i = 0; i < V.values.size(); ++i) out.data()[i] = std::norm(V.values.data()[i]);
    return out;
}

}  // namespace ridgekit
