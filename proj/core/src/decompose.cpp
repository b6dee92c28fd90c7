#include "ridgekit/decompose.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>

#include "ridgekit/errors.hpp"
#include "ridgekit/io.hpp"
#include "ridgekit/tuning.hpp"

namespace ridgekit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Uniform cubic B-spline basis on [a, b] with n_knots knots (n_knots + 2 functions).
struct SplineBasis {
    double a;
    double h;
    std::size_t intervals;

    SplineBasis(double lo, double hi, std::size_t n_knots)
        : a(lo), h((hi - lo) / static_cast<double>(n_knots - 1)), intervals(n_knots - 1) {}

    std::size_t size() const { return intervals + 3; }

    // first basis index and the four weights at x
    std::size_t eval(double x, double w[4]) const {
        double s = h > 0 ? (x - a) / h : 0.0;
        auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, static_cast<double>(intervals - 1)));
        const double u = s - static_cast<double>(i);
        const double v = 1.0 - u;
        w[0] = v * v * v / 6.0;
        w[1] = (3.0 * u * u * u - 6.0 * u * u + 4.0) / 6.0;
        w[2] = (-3.0 * u * u * u + 3.0 * u * u + 3.0 * u + 1.0) / 6.0;
        w[3] = u * u * u / 6.0;
        return i;
    }
};

std::vector<double> monotone(std::vector<double> phi) {
    for (std::size_t n = 1; n < phi.size(); ++n) phi[n] = std::max(phi[n], phi[n - 1]);
    return phi;
}

ImtEstimate fit_along(const Signal& target, const Tfr& S, const Ridge& fundamental, double delta, std::size_t D,
                      std::size_t n_knots) {
    const ComplexComponent comp = reconstruct_component(S, fundamental, delta);
    return samd_fit(target, monotone(phase_unwrap(comp)), D, n_knots);
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

}  // namespace

ComplexComponent reconstruct_component(const Tfr& S, const Ridge& c, double delta_hz) {
    if (!(delta_hz > 0)) throw InvalidParameter("reconstruction bandwidth must be > 0");
    if (c.size() != S.rows()) throw InvalidParameter("ridge length does not match the TFR time axis");
    if (!(S.window_center > 0)) throw InvalidParameter("TFR carries no window centre value");
    ComplexComponent out;
    out.source_ridge = c;
    out.values.assign(S.rows(), cplx{});
    const double scale = 2.0 * S.dt / S.window_center * S.dxi;
    const double half = delta_hz / S.dxi;
    const long cols = static_cast<long>(S.cols());
    for (std::size_t l = 0; l < S.rows(); ++l) {
        const long centre = c.bins[l];
        const long reach = static_cast<long>(std::ceil(half));
        const long lo = std::max<long>(1, centre - reach);
        const long hi = std::min<long>(cols, centre + reach);
        cplx acc{};
        bool any = false;
        for (long q = lo; q <= hi; ++q) {
            if (!(std::abs(static_cast<double>(q - centre)) < half)) continue;
            acc += S.values(l, static_cast<std::size_t>(q - 1));
            any = true;
        }
        if (!any) ++out.empty_band_samples;
        out.values[l] = scale * acc;
    }
    return out;
}

std::vector<double> phase_unwrap(const std::vector<cplx>& x) {
    const std::size_t N = x.size();
    std::vector<double> out(N, 0.0);
    std::vector<std::size_t> known;
    for (std::size_t n = 0; n < N; ++n)
        if (std::abs(x[n]) > 0) known.push_back(n);
    if (known.empty()) return out;

    double prev = std::arg(x[known[0]]) / kTwoPi;
    out[known[0]] = prev;
    for (std::size_t i = 1; i < known.size(); ++i) {
        const double w = std::arg(x[known[i]]) / kTwoPi;
        double d = w - prev;
        d -= std::round(d);
        prev += d;
        out[known[i]] = prev;
    }
    // fill gaps
    for (std::size_t n = 0; n < known.front(); ++n) out[n] = out[known.front()];
    for (std::size_t n = known.back() + 1; n < N; ++n) out[n] = out[known.back()];
    for (std::size_t i = 1; i < known.size(); ++i) {
        const std::size_t a = known[i - 1];
        const std::size_t b = known[i];
        for (std::size_t n = a + 1; n < b; ++n) {
            const double t = static_cast<double>(n - a) / static_cast<double>(b - a);
            out[n] = out[a] + t * (out[b] - out[a]);
        }
    }
    return out;
}

std::vector<double> phase_unwrap(const ComplexComponent& x) { return phase_unwrap(x.values); }

ImtEstimate samd_fit(const Signal& f, const std::vector<double>& phi1, std::size_t D, std::size_t n_knots) {
    f.validate();
    const std::size_t N = f.size();
    if (phi1.size() != N) throw InvalidParameter("samd_fit: phase length does not match the signal");
    if (D < 1) throw InvalidParameter("samd_fit: harmonic order D must be >= 1");
    if (n_knots < 2) throw InvalidParameter("samd_fit: need at least 2 knots");
    for (std::size_t n = 1; n < N; ++n)
        if (phi1[n] < phi1[n - 1]) throw InvalidParameter("samd_fit: fundamental phase must be nondecreasing");

    const SplineBasis basis(0.0, static_cast<double>(N - 1), n_knots);
    const std::size_t P = basis.size();
    const auto cols = static_cast<Eigen::Index>(2 * D * P);
    if (static_cast<std::size_t>(cols) > N) throw InvalidParameter("samd_fit: more coefficients than samples");
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), cols);
    Eigen::VectorXd y(static_cast<Eigen::Index>(N));
    double w[4];
    for (std::size_t n = 0; n < N; ++n) {
        y(static_cast<Eigen::Index>(n)) = f.samples[n];
        const std::size_t i0 = basis.eval(static_cast<double>(n), w);
        for (std::size_t j = 1; j <= D; ++j) {
            const double th = kTwoPi * static_cast<double>(j) * phi1[n];
            const double c = std::cos(th);
            const double s = std::sin(th);
            const std::size_t a0 = (j - 1) * 2 * P;
            const std::size_t b0 = a0 + P;
            for (std::size_t r = 0; r < 4; ++r) {
                X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a0 + i0 + r)) = w[r] * c;
                X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(b0 + i0 + r)) = w[r] * s;
            }
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < cols) throw DegenerateInput("samd_fit: design is rank deficient (degenerate fundamental phase)");
    const Eigen::VectorXd beta = qr.solve(y);

    ImtEstimate est;
    est.D = D;
    est.fundamental_phase = phi1;
    est.harmonic_amps.assign(D, std::vector<double>(N));
    est.harmonic_phases.assign(D, std::vector<double>(N));
    est.composite.assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t i0 = basis.eval(static_cast<double>(n), w);
        for (std::size_t j = 1; j <= D; ++j) {
            const std::size_t a0 = (j - 1) * 2 * P;
            const std::size_t b0 = a0 + P;
            double A = 0.0;
            double B = 0.0;
            for (std::size_t r = 0; r < 4; ++r) {
                A += w[r] * beta(static_cast<Eigen::Index>(a0 + i0 + r));
                B += w[r] * beta(static_cast<Eigen::Index>(b0 + i0 + r));
            }
            const double amp = std::hypot(A, B);
            const double ph = static_cast<double>(j) * phi1[n] - std::atan2(B, A) / kTwoPi;
            est.harmonic_amps[j - 1][n] = amp;
            est.harmonic_phases[j - 1][n] = ph;
            est.composite[n] += amp * std::cos(kTwoPi * ph);
        }
    }
    return est;
}

std::vector<std::size_t> ridge_ordering(const std::vector<RidgeSet>& ridges) {
    std::vector<std::size_t> idx(ridges.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> mean(ridges.size());
    std::vector<int> first(ridges.size());
    for (std::size_t i = 0; i < ridges.size(); ++i) {
        if (ridges[i].rows.empty() || ridges[i].fundamental().bins.empty())
            throw InvalidParameter("ridge_ordering: empty ridge set");
        mean[i] = ridges[i].fundamental().mean_bin();
        first[i] = ridges[i].fundamental().bins.front();
    }
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (mean[a] != mean[b]) return mean[a] < mean[b];
        return first[a] < first[b];
    });
    return idx;
}

double default_delta(const Ridge& fundamental) {
    const double mean_hz = fundamental.mean_bin() * fundamental.dxi;
    return std::max(0.2 * mean_hz, 3.0 * fundamental.dxi);
}

WindowPair TfrConfig::window(double fs) const {
    const std::size_t K = window_half_length > 0 ? window_half_length
                                                 : half_length_for_cycles(fs, nominal_hz, window_cycles);
    return gaussian_window(K, sigma);
}

TfrOptions TfrConfig::options(double fs) const {
    TfrOptions o;
    o.bins = bins_for_resolution(fs, dxi_hz);
    if (max_hz > 0) {
        const double step = fs / (2.0 * static_cast<double>(o.bins));
        o.max_bins = std::min(o.bins, static_cast<std::size_t>(std::ceil(max_hz / step)));
    }
    return o;
}

DecompositionResult samd_mhrd(const Signal& f0, const SamdMhrdConfig& cfg) {
    f0.validate();
    if (cfg.L < 1) throw InvalidParameter("samd_mhrd needs L >= 1");
    if (cfg.I < 1) throw InvalidParameter("samd_mhrd needs I >= 1");
    if (cfg.K < 1) throw InvalidParameter("samd_mhrd needs K >= 1");
    const std::size_t N = f0.size();
    const double fs = f0.fs;

    std::vector<std::size_t> D = cfg.D;
    if (D.empty()) D.assign(cfg.L, cfg.K);
    if (D.size() != cfg.L) throw InvalidParameter("samd_mhrd needs one harmonic order per IMT");

    PenaltyConfig pen = cfg.penalties;
    if (pen.lambda.empty()) pen.lambda = lambda_schedule(1.0, 0.1, cfg.K);
    pen.validate(cfg.K);

    const WindowPair window = cfg.tfr.window(fs);
    const TfrOptions topts = cfg.tfr.options(fs);
    const double dxi = fs / (2.0 * static_cast<double>(topts.bins));
    const SegmentPlan plan = cfg.plan ? *cfg.plan : default_plan(N, 1.0 / fs, dxi, cfg.segment_s, cfg.band_hz);
    const std::size_t knots =
        cfg.n_knots > 0 ? cfg.n_knots
                        : std::max<std::size_t>(4, static_cast<std::size_t>(std::lround(N / fs / 2.0)) + 1);
    MhrdOptions mopts;
    mopts.exponent = cfg.mhrd_exponent;
    if (cfg.fundamental_min_hz) mopts.fundamental_min = static_cast<int>(std::ceil(*cfg.fundamental_min_hz / dxi));
    if (cfg.fundamental_max_hz) mopts.fundamental_max = static_cast<int>(std::floor(*cfg.fundamental_max_hz / dxi));

    auto tfr_of = [&](const std::vector<double>& x) { return sst2(Signal(x, fs, f0.t0), window, topts); };
    auto detect = [&](const Tfr& S) {
        const NormalizedTfr Rn = normalize_tfr(S);
        return mhrd(Rn, cfg.K, pen, cfg.beta, plan, mopts);
    };
    auto empty_check = [&](const Tfr& S, std::size_t l) {
        if (!(S.max_abs() > 0))
            throw DegenerateInput("no energy left to detect IMT " + std::to_string(l + 1));
    };

    DecompositionResult res;
    res.fs = fs;
    res.t0 = f0.t0;
    std::vector<RidgeSet> ridges(cfg.L);
    std::vector<ImtEstimate> est(cfg.L);
    std::vector<double> deltas(cfg.L, 0.0);

    for (std::size_t it = 0; it < cfg.I; ++it) {
        if (cfg.literal_passes) {
            std::vector<double> f = it == 0 ? f0.samples : minus(f0.samples, est.back().composite);
            const Tfr S = tfr_of(f);
            empty_check(S, 0);
            for (std::size_t l = 0; l < cfg.L; ++l) ridges[l] = detect(S);
            const auto order = ridge_ordering(ridges);
            std::vector<RidgeSet> sorted;
            for (std::size_t i : order) sorted.push_back(ridges[i]);
            ridges = std::move(sorted);
            for (std::size_t l = 0; l < cfg.L; ++l) {
                const Tfr Sf = tfr_of(f);
                deltas[l] = cfg.delta_hz.value_or(default_delta(ridges[l].fundamental()));
                est[l] = fit_along(Signal(f, fs, f0.t0), Sf, ridges[l].fundamental(), deltas[l], D[l], knots);
                f = minus(f0.samples, est[l].composite);
            }
        } else if (it == 0) {
            std::vector<double> r = f0.samples;
            for (std::size_t l = 0; l < cfg.L; ++l) {
                const Tfr S = tfr_of(r);
                empty_check(S, l);
                ridges[l] = detect(S);
                deltas[l] = cfg.delta_hz.value_or(default_delta(ridges[l].fundamental()));
                est[l] = fit_along(Signal(r, fs, f0.t0), S, ridges[l].fundamental(), deltas[l], D[l], knots);
                r = minus(r, est[l].composite);
            }
            const auto order = ridge_ordering(ridges);
            std::vector<RidgeSet> rs;
            std::vector<ImtEstimate> es;
            std::vector<double> ds;
            for (std::size_t i : order) {
                rs.push_back(ridges[i]);
                es.push_back(est[i]);
                ds.push_back(deltas[i]);
            }
            ridges = std::move(rs);
            est = std::move(es);
            deltas = std::move(ds);
        } else {
            for (std::size_t l = 0; l < cfg.L; ++l) {
                std::vector<double> target = f0.samples;
                for (std::size_t m = 0; m < cfg.L; ++m)
                    if (m != l) target = minus(target, est[m].composite);
                const Tfr S = tfr_of(target);
                empty_check(S, l);
                const NormalizedTfr Rn = normalize_tfr(S);
                ridges[l] = mhrd_conditioned(Rn, ridges[l].fundamental(), cfg.K, pen, cfg.beta,
                                             cfg.conditioned_exponent);
                deltas[l] = cfg.delta_hz.value_or(default_delta(ridges[l].fundamental()));
                est[l] = fit_along(Signal(target, fs, f0.t0), S, ridges[l].fundamental(), deltas[l], D[l], knots);
            }
        }
        res.estimates.push_back(est);
    }

    res.ridges = ridges;
    res.delta_hz = deltas;
    res.residual = f0.samples;
    for (const ImtEstimate& e : est) res.residual = minus(res.residual, e.composite);
    return res;
}

std::vector<std::string> export_decomposition(const DecompositionResult& r, const std::string& dir,
                                              const std::string& stem) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;
    const auto& fin = r.final_estimates();
    const std::size_t N = r.residual.size();
    auto time_of = [&](std::size_t n) { return r.t0 + static_cast<double>(n) / r.fs; };
    for (std::size_t l = 0; l < fin.size(); ++l) {
        const ImtEstimate& e = fin[l];
        const std::string path = (fs::path(dir) / (stem + ".imt" + std::to_string(l + 1) + ".csv")).string();
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << std::setprecision(17) << "time_s,composite";
        for (std::size_t j = 1; j <= e.D; ++j) out << ",amp_" << j;
        for (std::size_t j = 1; j <= e.D; ++j) out << ",phase_" << j;
        out << '\n';
        for (std::size_t n = 0; n < N; ++n) {
            out << time_of(n) << ',' << e.composite[n];
            for (std::size_t j = 0; j < e.D; ++j) out << ',' << e.harmonic_amps[j][n];
            for (std::size_t j = 0; j < e.D; ++j) out << ',' << e.harmonic_phases[j][n];
            out << '\n';
        }
        written.push_back(path);
    }
    {
        const std::string path = (fs::path(dir) / (stem + ".residual.csv")).string();
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << std::setprecision(17) << "time_s,residual\n";
        for (std::size_t n = 0; n < N; ++n) out << time_of(n) << ',' << r.residual[n] << '\n';
        written.push_back(path);
    }
    for (std::size_t l = 0; l < r.ridges.size(); ++l) {
        const std::string path = (fs::path(dir) / (stem + ".ridges" + std::to_string(l + 1) + ".csv")).string();
        write_ridges_csv(path, r.ridges[l]);
        written.push_back(path);
    }
    return written;
}

}  // namespace ridgekit
