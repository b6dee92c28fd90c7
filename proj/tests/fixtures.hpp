#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "ridgekit/decompose.hpp"
#include "ridgekit/tfa.hpp"

namespace fixture {

// Three-harmonic signal with a slowly wandering fundamental near 1.2 Hz plus heavy-tailed speckle.
inline ridgekit::Signal harmonic_speckle(std::uint64_t seed, double noise = 0.6, double fs = 50.0, double T = 20.0) {
    std::mt19937_64 rng(seed);
    std::student_t_distribution<double> t3(3.0);
    const auto N = static_cast<std::size_t>(fs * T);
    std::vector<double> x(N);
    double phase = 0;
    for (std::size_t n = 0; n < N; ++n) {
        const double t = n / fs;
        phase += (1.2 + 0.15 * std::sin(2 * std::numbers::pi * t / T)) / fs;
        const double p = 2 * std::numbers::pi * phase;
        x[n] = 0.8 * std::cos(p) + 1.0 * std::cos(2 * p) + 0.6 * std::cos(3 * p) + noise * t3(rng);
    }
    return ridgekit::Signal(x, fs);
}

inline ridgekit::Tfr harmonic_speckle_sst(std::uint64_t seed) {
    const ridgekit::Signal s = harmonic_speckle(seed);
    ridgekit::TfrConfig tc;
    tc.dxi_hz = 0.1;
    tc.max_hz = 6.0;
    tc.nominal_hz = 1.2;
    return ridgekit::sst2(s, tc.window(s.fs), tc.options(s.fs));
}

}  // namespace fixture
