#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ridgekit/decompose.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/simgen.hpp"

using namespace ridgekit;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> linear_phase(std::size_t N, double fs, double f0, double chirp = 0.0) {
    std::vector<double> phi(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double t = n / fs;
        phi[n] = f0 * t + 0.5 * chirp * t * t;
    }
    return phi;
}

double rel_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += a[i] * a[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST(Reconstruct, ZeroTfr) {
    Tfr S;
    S.values = Grid<cplx>(10, 8);
    S.dxi = 0.5;
    S.dt = 0.1;
    Ridge c;
    c.bins.assign(10, 3);
    const ComplexComponent x = reconstruct_component(S, c, 1.0);
    for (const cplx& v : x.values) EXPECT_EQ(v, cplx(0));
}

TEST(Reconstruct, FullBandIsScaledRowSum) {
    const double fs = 100;
    std::vector<double> x(500);
    for (std::size_t n = 0; n < 500; ++n) x[n] = std::sin(0.37 * n) + 0.2 * std::cos(1.3 * n);
    TfrConfig tc;
    tc.dxi_hz = 0.5;
    const Tfr S = sst2(Signal(x, fs), tc.window(fs), tc.options(fs));
    Ridge c;
    c.bins.assign(500, static_cast<int>(S.cols() / 2));
    const ComplexComponent r = reconstruct_component(S, c, 2.0 * S.cols() * S.dxi);
    const double scale = 2.0 * S.dt / S.window_center * S.dxi;
    for (std::size_t l = 0; l < 500; l += 7) {
        cplx sum = 0;
        for (std::size_t m = 0; m < S.cols(); ++m) sum += S.values(l, m);
        EXPECT_NEAR(std::abs(r.values[l] - scale * sum), 0.0, 1e-12 * (1 + std::abs(scale * sum)));
    }
}

TEST(Reconstruct, ToneAmplitudeAndPhaseAdvance) {
    const double fs = 200, f0 = 10.0, A = 1.7;
    const std::size_t N = 3000;
    std::vector<double> x(N);
    for (std::size_t n = 0; n < N; ++n) x[n] = A * std::cos(2 * kPi * f0 * n / fs);
    TfrConfig tc;
    tc.dxi_hz = 0.1;
    tc.nominal_hz = f0;
    tc.max_hz = 20;
    const Tfr S = sst2(Signal(x, fs), tc.window(fs), tc.options(fs));
    Ridge c;
    c.bins.assign(N, bin_of_frequency(f0, S.dxi));
    c.dxi = S.dxi;
    const ComplexComponent r = reconstruct_component(S, c, 1.0);
    const std::vector<double> phi = phase_unwrap(r);
    const std::size_t K = tc.window(fs).K;
    for (std::size_t l = K; l + K < N; l += 11) {
        EXPECT_GT(std::abs(r.values[l]), 0.95 * A) << l;
        EXPECT_LT(std::abs(r.values[l]), 1.05 * A) << l;
        EXPECT_NEAR(phi[l + 1] - phi[l], f0 / fs, 0.02 * f0 / fs) << l;
    }
}

TEST(Reconstruct, EmptyBandCounted) {
    Tfr S;
    S.values = Grid<cplx>(4, 5, cplx(1, 0));
    S.dxi = 1.0;
    Ridge c;
    c.bins = {1, 2, 3, 4};
    // a band narrower than a bin still contains the centre bin
    const ComplexComponent r = reconstruct_component(S, c, 0.5);
    EXPECT_EQ(r.empty_band_samples, 0u);
    EXPECT_THROW(reconstruct_component(S, c, 0.0), InvalidParameter);
}

TEST(Unwrap, ConstantPhase) {
    std::vector<cplx> x(20, std::polar(2.0, 1.0));
    for (double p : phase_unwrap(x)) EXPECT_DOUBLE_EQ(p, 1.0 / (2 * kPi));
}

TEST(Unwrap, LinearAndAliased) {
    std::vector<cplx> a(50), b(50);
    for (std::size_t n = 0; n < 50; ++n) {
        a[n] = std::polar(1.0, 2 * kPi * 0.3 * n);
        b[n] = std::polar(1.0, 2 * kPi * 0.6 * n);
    }
    const auto pa = phase_unwrap(a), pb = phase_unwrap(b);
    for (std::size_t n = 1; n < 50; ++n) {
        EXPECT_NEAR(pa[n] - pa[n - 1], 0.3, 1e-12);
        EXPECT_NEAR(pb[n] - pb[n - 1], -0.4, 1e-12);
    }
}

TEST(Unwrap, GapsAreInterpolated) {
    std::vector<cplx> x(10);
    for (std::size_t n = 0; n < 10; ++n) x[n] = std::polar(1.0, 2 * kPi * 0.1 * n);
    x[4] = x[5] = 0;
    const auto p = phase_unwrap(x);
    EXPECT_NEAR(p[4], p[3] + 0.1, 1e-12);
    EXPECT_NEAR(p[5], p[3] + 0.2, 1e-12);
}

TEST(SamdFit, SingleHarmonicExact) {
    const double fs = 100;
    const auto phi = linear_phase(2000, fs, 1.3, 0.05);
    std::vector<double> x(phi.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * kPi * phi[n]);
    const ImtEstimate e = samd_fit(Signal(x, fs), phi, 1, 6);
    EXPECT_LT(rel_norm(x, e.composite), 1e-6);
    for (double a : e.harmonic_amps[0]) EXPECT_NEAR(a, 1.0, 1e-6);
}

TEST(SamdFit, TwoHarmonicAmplitudes) {
    const double fs = 100;
    const auto phi = linear_phase(3000, fs, 0.9, 0.02);
    std::vector<double> x(phi.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.2 * std::cos(2 * kPi * phi[n]) + std::cos(4 * kPi * phi[n]);
    const ImtEstimate e = samd_fit(Signal(x, fs), phi, 2, 8);
    for (std::size_t n = 0; n < x.size(); n += 37) {
        EXPECT_NEAR(e.harmonic_amps[0][n], 0.2, 1e-3);
        EXPECT_NEAR(e.harmonic_amps[1][n], 1.0, 1e-3);
    }
}

TEST(SamdFit, ExtraHarmonicStaysSilent) {
    const double fs = 100;
    const auto phi = linear_phase(2000, fs, 2.0);
    std::vector<double> x(phi.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.7 * std::cos(2 * kPi * phi[n] + 0.4);
    const ImtEstimate e = samd_fit(Signal(x, fs), phi, 2, 5);
    for (double a : e.harmonic_amps[1]) EXPECT_LT(a, 1e-3);
}

TEST(SamdFit, IsAProjection) {
    const double fs = 50;
    const auto phi = linear_phase(1500, fs, 1.1, 0.03);
    std::vector<double> x(phi.size());
    for (std::size_t n = 0; n < x.size(); ++n)
        x[n] = std::cos(2 * kPi * phi[n]) * (1 + 0.3 * std::sin(0.01 * n)) + 0.1 * std::sin(0.9 * n);
    const ImtEstimate a = samd_fit(Signal(x, fs), phi, 3, 6);
    const ImtEstimate b = samd_fit(Signal(a.composite, fs), phi, 3, 6);
    EXPECT_LT(rel_norm(a.composite, b.composite), 1e-9);
}

TEST(SamdFit, ConstantPhaseIsDegenerate) {
    std::vector<double> phi(400, 0.25), x(400, 1.0);
    EXPECT_THROW(samd_fit(Signal(x, 10), phi, 2, 4), DegenerateInput);
}

TEST(SamdFit, CompositeMatchesHarmonics) {
    const double fs = 100;
    const auto phi = linear_phase(1000, fs, 1.7);
    std::vector<double> x(phi.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2 * kPi * phi[n]) + 0.5 * std::sin(6 * kPi * phi[n]);
    const ImtEstimate e = samd_fit(Signal(x, fs), phi, 3, 4);
    for (std::size_t n = 0; n < x.size(); n += 13) {
        double s = 0;
        for (std::size_t j = 0; j < 3; ++j) s += e.harmonic_amps[j][n] * std::cos(2 * kPi * e.harmonic_phases[j][n]);
        EXPECT_NEAR(s, e.composite[n], 1e-9 * (1 + std::abs(s)));
    }
}

TEST(Ordering, Rules) {
    auto set = [](std::vector<int> bins) {
        RidgeSet r;
        Ridge c;
        c.bins = std::move(bins);
        r.rows.push_back(c);
        return r;
    };
    EXPECT_EQ(ridge_ordering({set({1, 1}), set({3, 3})}), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(ridge_ordering({set({10, 10}), set({5, 5})}), (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(ridge_ordering({set({6, 4}), set({4, 6})}), (std::vector<std::size_t>{1, 0}));
}

TEST(SamdMhrd, ResidualIdentityAndNoiseFreeFit) {
    SimOptions o;
    o.N = 4000;
    const Y1Sample y = gen_y1(0.5, std::nullopt, 3, o);
    SamdMhrdConfig cfg;
    cfg.tfr.dxi_hz = 0.1;
    cfg.tfr.max_hz = 15;
    cfg.I = 2;
    const DecompositionResult r = samd_mhrd(y.signal, cfg);
    ASSERT_EQ(r.estimates.size(), 2u);
    const auto& x = r.final_estimates()[0].composite;
    double worst = 0, norm = 0;
    for (std::size_t n = 0; n < x.size(); ++n) {
        worst = std::max(worst, std::abs(y.signal.samples[n] - x[n] - r.residual[n]));
        norm = std::max(norm, std::abs(y.signal.samples[n]));
    }
    EXPECT_LE(worst, 1e-9 * norm);
    EXPECT_LT(relative_error(y.truth.clean.samples, r.estimates[0][0].composite), 0.1);
    // phase nondecreasing
    const auto& phi = r.final_estimates()[0].fundamental_phase;
    for (std::size_t n = 1; n < phi.size(); ++n) EXPECT_GE(phi[n], phi[n - 1]);
}

TEST(SamdMhrd, RejectsBadCounts) {
    const Signal s(std::vector<double>(100, 1.0), 10);
    SamdMhrdConfig cfg;
    cfg.L = 0;
    EXPECT_THROW(samd_mhrd(s, cfg), InvalidParameter);
    cfg.L = 1;
    cfg.I = 0;
    EXPECT_THROW(samd_mhrd(s, cfg), InvalidParameter);
}

TEST(DefaultDelta, FloorAndScale) {
    Ridge c;
    c.dxi = 0.1;
    c.bins.assign(10, 100);  // 10 Hz
    EXPECT_NEAR(default_delta(c), 2.0, 1e-12);
    c.bins.assign(10, 5);  // 0.5 Hz -> 0.1 Hz, below three bins
    EXPECT_NEAR(default_delta(c), 0.3, 1e-12);
}
