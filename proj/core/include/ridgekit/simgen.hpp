#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridgekit/decompose.hpp"
#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

// Composite noise: ARMA(1,1) with Student-t innovations on the first `split`
// samples, i.i.d. Student-t afterwards.
struct NoiseSpec {
    double ar = 0.5;
    double ma = 0.3;
    std::size_t split = 5000;
    double arma_dof = 4.0;
    double iid_dof = 5.0;

    void validate() const;
};

struct SimOptions {
    double fs = 200.0;
    std::size_t N = 10000;
    double brownian_scale_s = 20.0;  // B
    double jitter_scale_s = 5.0;     // B'
    double jitter_variance = 0.1;    // variance of U (cycles^2)
    bool shape_jitter = true;        // false sets U to zero
    NoiseSpec noise;
    std::size_t max_redraws = 1000;
};

// One IMT of a synthetic realisation.
struct SimTruth {
    Signal clean;
    std::vector<double> if_fundamental;             // Hz
    std::vector<std::vector<double>> phases;        // cycles, one per harmonic
    std::vector<std::vector<double>> amps;          // one per harmonic
    std::vector<std::vector<double>> harmonic_ifs;  // Hz, one per harmonic
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t rejected = 0;  // redraws before this realisation was accepted
};

struct Y1Sample {
    Signal signal;
    SimTruth truth;
    std::vector<double> noise;  // unscaled Phi
};

struct Y2Sample {
    Signal signal;
    SimTruth imt1;
    SimTruth imt2;
    double sigma = 0.0;
    std::vector<double> noise;
};

// Standard Brownian path sampled at t_n = n/fs, n = 1..N (W(0) = 0).
std::vector<double> brownian_path(std::size_t N, double fs, std::uint64_t seed);

// Gaussian smoothing (std B_s seconds) with a kernel cut at +-4 B_s and mirror extension.
std::vector<double> gaussian_smooth(const std::vector<double>& x, double fs, double B_s);

// brownian_path followed by gaussian_smooth.
std::vector<double> smoothed_brownian(double duration_s, double fs, double B_s, std::uint64_t seed);

std::vector<double> composite_noise(std::size_t N, const NoiseSpec& spec, std::uint64_t seed);

// sigma with 20 log10(std(clean) / std(sigma noise)) = snr_db.
double sigma_for_snr(const std::vector<double>& clean, const std::vector<double>& noise, double snr_db);

Y1Sample gen_y1(double D1, std::optional<double> snr_db, std::uint64_t seed, const SimOptions& opts = {});
Y2Sample gen_y2(double D1, double D2, std::optional<double> snr_db, std::uint64_t seed,
                const SimOptions& opts = {});

// ||truth - c dxi||_2 / ||truth||_2
double relative_if_error(const std::vector<double>& truth_if, const Ridge& c);

// ||s - s_hat||_2 / ||s||_2
double relative_error(const std::vector<double>& s, const std::vector<double>& s_hat);

enum class Detector { SingleRd, SamdMhrd };

const char* to_string(Detector d);
Detector detector_from_string(const std::string& name);

struct BenchConfig {
    SamdMhrdConfig mhrd;       // L forced to 1 and I to 1
    double single_lambda = 1.0;
    std::size_t single_peels = 3;
    SimOptions sim;
};

// Fundamental ridge of the peeling baseline: single_rd then masking, `peels`
// times; the curve with the lowest mean frequency is returned.
Ridge single_rd_peeled(const Tfr& S, double lambda, std::size_t peels);

// Fundamental ridge found by each detector on one Y1 signal.
Ridge detect_fundamental(Detector d, const Signal& y, const BenchConfig& cfg);

struct BenchRow {
    Detector detector = Detector::SamdMhrd;
    double D1 = 0.0;
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    double delta = 0.0;
};

// Realisation r of cell (D1, snr) uses seed + r, so the same seeds are shared across detectors and cells.
std::vector<BenchRow> run_benchmark(Detector d, const std::vector<double>& D1s,
                                    const std::vector<std::optional<double>>& snrs, std::size_t n_realizations,
                                    std::uint64_t seed, const BenchConfig& cfg = {});

void write_benchmark_csv(const std::string& path, const std::vector<BenchRow>& rows);

// Resolution and band settings used for the synthetic benchmarks.
BenchConfig default_y1_config();
SamdMhrdConfig default_y2_config();

}  // namespace ridgekit
