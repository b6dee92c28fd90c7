#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ridgekit/errors.hpp"
#include "ridgekit/tfa.hpp"

using namespace ridgekit;

namespace {

Signal tone(double f, double fs, std::size_t N, double amp = 1.0) {
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) x[n] = amp * std::cos(2 * std::numbers::pi * f * n / fs);
    return Signal(x, fs);
}

std::size_t argmax_row(const Tfr& R, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t m = 1; m < R.cols(); ++m)
        if (std::abs(R.values(n, m)) > std::abs(R.values(n, best))) best = m;
    return best;
}

// Direct evaluation of the windowed sum, centre-referenced phase.
cplx direct_stft(const Signal& s, const WindowPair& w, std::size_t M, std::size_t n, std::size_t m) {
    cplx acc = 0;
    const long K = static_cast<long>(w.K);
    for (long k = 0; k <= 2 * K; ++k) {
        const long idx = static_cast<long>(n) + k - K;
        if (idx < 0 || idx >= static_cast<long>(s.size())) continue;
        acc += s.samples[idx] * w.h[k] * std::polar(1.0, -2 * std::numbers::pi * (k - K) * double(m) / (2.0 * M));
    }
    return acc;
}

}  // namespace

TEST(Window, CentreIsOneAndSlopeZero) {
    const WindowPair w = gaussian_window(4, 0.15);
    ASSERT_EQ(w.h.size(), 9u);
    EXPECT_DOUBLE_EQ(w.h[4], 1.0);
    EXPECT_DOUBLE_EQ(w.dh[4], 0.0);
    EXPECT_DOUBLE_EQ(w.center(), 1.0);
}

TEST(Window, HandValue) {
    const WindowPair w = gaussian_window(2, 0.2);
    EXPECT_NEAR(w.h[0], std::exp(-3.125), 1e-15);
    EXPECT_NEAR(w.h[0], 0.043937, 1e-6);
    // derivative with respect to the normalised time
    EXPECT_NEAR(w.dh[0], 0.5 * w.h[0] / 0.04, 1e-15);
}

TEST(Window, RejectsBadParameters) {
    EXPECT_THROW(gaussian_window(0, 0.1), InvalidParameter);
    EXPECT_THROW(gaussian_window(3, 0.0), InvalidParameter);
    EXPECT_THROW(gaussian_window(3, -1.0), InvalidParameter);
}

TEST(Stft, MatchesDirectSum) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> x(64);
    for (auto& v : x) v = g(rng);
    const Signal s(x, 50.0);
    const WindowPair w = gaussian_window(7, 0.2);
    const std::size_t M = 16;
    const Tfr V = stft(s, w, M);
    ASSERT_EQ(V.rows(), 64u);
    ASSERT_EQ(V.cols(), M);
    EXPECT_DOUBLE_EQ(V.dxi, 50.0 / (2.0 * M));
    for (std::size_t n = 0; n < 64; n += 5)
        for (std::size_t c = 0; c < M; ++c) {
            const cplx ref = direct_stft(s, w, M, n, c + 1);
            EXPECT_NEAR(std::abs(V.values(n, c) - ref), 0.0, 1e-12 * (1 + std::abs(ref)));
        }
}

TEST(Stft, ZeroSignal) {
    const Tfr V = stft(Signal(std::vector<double>(40, 0.0), 10.0), gaussian_window(5, 0.15), 8);
    for (const auto& v : V.values.data()) EXPECT_EQ(v, cplx(0));
}

TEST(Stft, Linearity) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    std::vector<double> a(300), b(300), mix(300);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = g(rng);
        b[i] = g(rng);
        mix[i] = 2.5 * a[i] - 0.75 * b[i];
    }
    const WindowPair w = gaussian_window(20, 0.15);
    const Tfr Va = stft(Signal(a, 100), w, 50), Vb = stft(Signal(b, 100), w, 50), Vm = stft(Signal(mix, 100), w, 50);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < Vm.values.size(); ++i) {
        num = std::max(num, std::abs(Vm.values.data()[i] - (2.5 * Va.values.data()[i] - 0.75 * Vb.values.data()[i])));
        den = std::max(den, std::abs(Vm.values.data()[i]));
    }
    EXPECT_LT(num / den, 1e-10);
}

TEST(Stft, TimeShiftCovariance) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<double> x(200, 0.0), y(200, 0.0);
    for (std::size_t i = 40; i < 120; ++i) x[i] = g(rng);
    const std::size_t s = 13;
    for (std::size_t i = 0; i + s < 200; ++i) y[i + s] = x[i];
    const WindowPair w = gaussian_window(10, 0.15);
    const Tfr Vx = stft(Signal(x, 100), w, 32), Vy = stft(Signal(y, 100), w, 32);
    for (std::size_t n = 20; n < 150; ++n)
        for (std::size_t m = 0; m < 32; ++m) EXPECT_NEAR(std::abs(Vx.values(n, m) - Vy.values(n + s, m)), 0.0, 1e-11);
}

TEST(Stft, ToneArgmax) {
    const double fs = 200;
    const Signal s = tone(10.0, fs, 2000);
    const WindowPair w = gaussian_window(half_length_for_cycles(fs, 10.0, 8), 0.15);
    const std::size_t M = bins_for_resolution(fs, 0.25);
    const Tfr V = stft(s, w, M);
    const int truth = bin_of_frequency(10.0, V.dxi);
    for (std::size_t n = w.K; n + w.K < s.size(); n += 7)
        EXPECT_LE(std::abs(static_cast<int>(argmax_row(V, n)) + 1 - truth), 1) << n;
}

TEST(Stft, MaxBinsKeepsPrefix) {
    const Signal s = tone(3.0, 50, 300);
    const WindowPair w = gaussian_window(20, 0.15);
    const Tfr full = stft(s, w, 64), cut = stft(s, w, 64, 20);
    ASSERT_EQ(cut.cols(), 20u);
    EXPECT_EQ(cut.total_bins, 64u);
    for (std::size_t n = 0; n < 300; n += 11)
        for (std::size_t m = 0; m < 20; ++m) EXPECT_EQ(cut.values(n, m), full.values(n, m));
}

TEST(Reassignment, UndefinedAtOrBelowThreshold) {
    const Signal s = tone(5.0, 100, 400);
    const WindowPair w = gaussian_window(30, 0.15);
    const Tfr V = stft(s, w, 50);
    std::vector<double> dh = w.dh;
    const Tfr Vd = stft_with(s, dh, 50);
    const double thr = 0.5 * V.max_abs();
    const ReassignmentMap map = reassignment_operator(V, Vd, thr);
    for (std::size_t n = 0; n < V.rows(); n += 3)
        for (std::size_t m = 0; m < V.cols(); ++m)
            EXPECT_EQ(map.defined(n, m), std::abs(V.values(n, m)) > thr);
}

TEST(Reassignment, ZeroDerivativeGivesZeroOffset) {
    const Signal s = tone(5.0, 100, 200);
    const WindowPair w = gaussian_window(20, 0.15);
    const Tfr V = stft(s, w, 40);
    Tfr Vd = V;
    for (auto& v : Vd.values.data()) v = 0;
    const ReassignmentMap map = reassignment_operator(V, Vd, 1e-300);
    for (std::size_t n = 0; n < V.rows(); ++n)
        for (std::size_t m = 0; m < V.cols(); ++m)
            if (map.defined(n, m)) EXPECT_EQ(map.omega(n, m), 0.0);
}

TEST(Reassignment, ShapeMismatchThrows) {
    const WindowPair w = gaussian_window(5, 0.15);
    const Tfr a = stft(tone(2, 20, 50), w, 10), b = stft(tone(2, 20, 60), w, 10);
    EXPECT_THROW(reassignment_operator(a, b, 1e-9), InvalidParameter);
}

TEST(Reassignment, ToneSqueezesToItsBin) {
    const double fs = 200;
    const Signal s = tone(12.5, fs, 2000);
    const WindowPair w = gaussian_window(100, 0.15);
    const std::size_t M = bins_for_resolution(fs, 0.25);  // 12.5 Hz is bin 50
    const Tfr V = stft(s, w, M);
    const Tfr Vd = stft_with(s, w.dh, M);
    const ReassignmentMap map = reassignment_operator(V, Vd, default_threshold(V));
    for (std::size_t n = 300; n < 1700; n += 50)
        for (int m = 48; m <= 52; ++m)
            if (map.defined(n, m - 1)) EXPECT_EQ(m - round_half_away(map.omega(n, m - 1)), 50) << n << ' ' << m;
}

TEST(Sst1, IdentityReassignment) {
    const Signal s = tone(4.0, 40, 120);
    const WindowPair w = gaussian_window(10, 0.15);
    const Tfr V = stft(s, w, 20);
    ReassignmentMap map;
    map.threshold = 0;
    map.omega = Grid<double>(V.rows(), V.cols(), 0.0);
    map.omega(3, 4) = std::nan("");
    const Tfr S = sst1(V, map);
    for (std::size_t n = 0; n < V.rows(); ++n)
        for (std::size_t m = 0; m < V.cols(); ++m)
            EXPECT_EQ(S.values(n, m), (n == 3 && m == 4) ? cplx(0) : V.values(n, m));
}

TEST(Sst1, RowMassConservation) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::vector<double> x(256);
    for (auto& v : x) v = g(rng);
    const Signal s(x, 64);
    const WindowPair w = gaussian_window(16, 0.15);
    const std::size_t M = 32;
    const Tfr V = stft(s, w, M);
    const Tfr Vd = stft_with(s, w.dh, M);
    const ReassignmentMap map = reassignment_operator(V, Vd, default_threshold(V));
    const Tfr S = sst1(V, map);
    for (std::size_t n = 0; n < V.rows(); ++n) {
        cplx in_range = 0, squeezed = 0;
        for (std::size_t l = 0; l < M; ++l) {
            if (!map.defined(n, l)) continue;
            const long target = static_cast<long>(l + 1) - round_half_away(map.omega(n, l));
            if (target >= 1 && target <= static_cast<long>(M)) in_range += V.values(n, l);
        }
        for (std::size_t m = 0; m < M; ++m) squeezed += S.values(n, m);
        EXPECT_NEAR(std::abs(in_range - squeezed), 0.0, 1e-12 * (1 + std::abs(in_range)));
    }
}

TEST(Sst1, ToneConcentration) {
    const double fs = 200;
    const Signal s = tone(10.0, fs, 2000);
    const WindowPair w = gaussian_window(half_length_for_cycles(fs, 10.0, 8), 0.15);
    TfrOptions opts;
    opts.bins = bins_for_resolution(fs, 0.25);
    const Tfr S = sst1(s, w, opts);
    const int b = bin_of_frequency(10.0, S.dxi);
    for (std::size_t n = w.K; n + w.K < s.size(); n += 13) {
        double near = 0, total = 0;
        for (std::size_t m = 0; m < S.cols(); ++m) {
            const double a = std::abs(S.values(n, m));
            total += a;
            if (std::abs(static_cast<int>(m) + 1 - b) <= 1) near += a;
        }
        EXPECT_GT(near, 0.9 * total) << n;
    }
}

TEST(Sst2, ZeroSignal) {
    TfrOptions opts;
    opts.bins = 16;
    const Tfr S = sst2(Signal(std::vector<double>(50, 0.0), 20), gaussian_window(5, 0.15), opts);
    for (const auto& v : S.values.data()) EXPECT_EQ(v, cplx(0));
}

TEST(Sst2, ToneAgreesWithSst1) {
    const double fs = 200;
    const Signal s = tone(7.3, fs, 2000);
    const WindowPair w = gaussian_window(half_length_for_cycles(fs, 7.3, 10), 0.15);
    TfrOptions opts;
    opts.bins = bins_for_resolution(fs, 0.1);
    opts.max_bins = 150;
    const Tfr S1 = sst1(s, w, opts), S2 = sst2(s, w, opts);
    EXPECT_EQ(S2.kind, TfrKind::Sst2);
    for (std::size_t n = w.K; n + w.K < s.size(); n += 17)
        EXPECT_LE(std::abs(static_cast<long>(argmax_row(S1, n)) - static_cast<long>(argmax_row(S2, n))), 1);
}

TEST(Sst2, SharperThanSpectrogramOnChirp) {
    const double fs = 200, T = 10;
    const std::size_t N = static_cast<std::size_t>(fs * T);
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double t = n / fs;
        x[n] = std::cos(2 * std::numbers::pi * (5 * t + 0.5 * t * t));  // 5 -> 15 Hz
    }
    const Signal s(x, fs);
    const WindowPair w = gaussian_window(100, 0.15);
    TfrOptions opts;
    opts.bins = bins_for_resolution(fs, 0.1);
    opts.max_bins = 250;
    const Tfr S = sst2(s, w, opts);
    const Tfr V = stft(s, w, opts.bins, opts.max_bins);
    const Grid<double> P = spectrogram(V);
    auto spread = [](auto weight, std::size_t cols) {
        std::size_t peak = 0;
        for (std::size_t m = 1; m < cols; ++m)
            if (weight(m) > weight(peak)) peak = m;
        double num = 0, den = 0;
        for (std::size_t m = 0; m < cols; ++m) {
            const double d = static_cast<double>(m) - static_cast<double>(peak);
            num += weight(m) * d * d;
            den += weight(m);
        }
        return num / den;
    };
    for (std::size_t n = 300; n < N - 300; n += 100) {
        const double sst_spread = spread([&](std::size_t m) { return std::norm(S.values(n, m)); }, S.cols());
        const double spec_spread = spread([&](std::size_t m) { return P(n, m); }, P.cols());
        EXPECT_LT(sst_spread, spec_spread) << n;
    }
}

TEST(Rounding, HalfAwayFromZero) {
    EXPECT_EQ(round_half_away(0.5), 1);
    EXPECT_EQ(round_half_away(-0.5), -1);
    EXPECT_EQ(round_half_away(1.49), 1);
    EXPECT_EQ(round_half_away(-2.5), -3);
}

TEST(SignalType, Validation) {
    EXPECT_THROW(Signal({}, 10).validate(), InvalidParameter);
    EXPECT_THROW(Signal({1.0, NAN}, 10).validate(), InvalidParameter);
    EXPECT_THROW(Signal({1.0}, 0).validate(), InvalidParameter);
    EXPECT_NO_THROW(Signal({1.0}, 5).validate());
}
