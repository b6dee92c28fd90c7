#include "ridgekit/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "ridgekit/decompose.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"

namespace ridgekit {

double renyi_entropy(std::span<const double> v, double alpha) {
    if (!(alpha > 0) || alpha == 1.0) throw InvalidParameter("renyi_entropy: alpha must be positive and not 1");
    double total = 0.0;
    for (double x : v) {
        if (x < 0 || !std::isfinite(x)) throw InvalidParameter("renyi_entropy: entries must be finite and nonnegative");
        total += x;
    }
    if (!(total > 0)) throw DegenerateInput("renyi_entropy: all-zero input");
    double s = 0.0;
    for (double x : v)
        if (x > 0) s += std::pow(x / total, alpha);
    return std::log(s) / (1.0 - alpha);
}

std::vector<double> lambda_schedule(double lambda1, double delta_lambda, std::size_t K) {
    if (K == 0) throw InvalidParameter("lambda_schedule: K must be positive");
    if (!(lambda1 >= 0) || !(delta_lambda >= 0)) throw InvalidParameter("lambda_schedule: negative penalty or step");
    if (!(1.0 - static_cast<double>(K - 1) * delta_lambda > 0))
        throw InvalidParameter("lambda_schedule: 1 - (K-1) delta_lambda must be positive");
    std::vector<double> out(K);
    for (std::size_t k = 0; k < K; ++k) out[k] = (1.0 - static_cast<double>(k) * delta_lambda) * lambda1;
    return out;
}

std::vector<double> log_uniform_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0) || !(hi >= lo) || n == 0) throw InvalidParameter("log_uniform_grid: need 0 < lo <= hi and n >= 1");
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

ParamGrid ParamGrid::defaults(std::size_t K) {
    ParamGrid g;
    g.K = K;
    g.lambda1_candidates = log_uniform_grid(0.1, 10.0, 7);
    // 2^-6 .. 2^-1 in six log steps, the last one short of 1/2 which is outside the admissible range
    g.beta_candidates.resize(6);
    for (int i = 0; i < 6; ++i) g.beta_candidates[static_cast<std::size_t>(i)] = std::exp2(-6.0 + 5.0 * i / 6.0);
    return g;
}

void ParamGrid::validate() const {
    if (lambda1_candidates.empty() || beta_candidates.empty()) throw InvalidParameter("ParamGrid: empty candidate set");
    for (double l : lambda1_candidates)
        if (!(l > 0) || !std::isfinite(l)) throw InvalidParameter("ParamGrid: lambda1 candidates must be positive");
    for (double b : beta_candidates)
        if (!(b > 0) || !(b < 0.5)) throw InvalidParameter("ParamGrid: beta candidates must lie in (0, 1/2)");
    if (K == 0) throw InvalidParameter("ParamGrid: K must be positive");
    if (!(1.0 - static_cast<double>(K - 1) * delta_lambda > 0) || delta_lambda < 0)
        throw InvalidParameter("ParamGrid: 1 - (K-1) delta_lambda must be positive");
    if (!(alpha > 0) || alpha == 1.0) throw InvalidParameter("ParamGrid: alpha must be positive and not 1");
    if (mask_delta_hz < 0) throw InvalidParameter("ParamGrid: negative mask bandwidth");
    if (exponent != 1 && exponent != 2) throw InvalidParameter("ParamGrid: exponent must be 1 or 2");
}

double masked_entropy_score(const Tfr& R, const RidgeSet& ridges, int half_width, double alpha) {
    const Tfr masked = mask_ridges(R, ridges, half_width);
    const std::size_t N = masked.rows(), M = masked.cols();
    if (N == 0 || M == 0) throw DegenerateInput("masked_entropy_score: empty TFR");
    std::vector<double> row(M);
    double sum = 0.0;
    for (std::size_t l = 0; l < N; ++l) {
        double total = 0.0;
        for (std::size_t q = 0; q < M; ++q) total += row[q] = std::abs(masked.values(l, q));
        sum += total > 0 ? renyi_entropy(row, alpha) : std::log(static_cast<double>(M));
    }
    return sum / static_cast<double>(N);
}

int mask_half_width(const ParamGrid& grid, const RidgeSet& ridges) {
    const Ridge& c1 = ridges.fundamental();
    const double hz = grid.mask_delta_hz > 0 ? grid.mask_delta_hz : default_delta(c1);
    return std::max(0, static_cast<int>(std::lround(hz / c1.dxi)));
}

TuningResult select_params(const Tfr& R, const ParamGrid& grid, const SegmentPlan& plan) {
    grid.validate();
    plan.validate(R.rows());
    const NormalizedTfr Rn = normalize_tfr(R);
    const std::size_t nb = grid.beta_candidates.size();
    const std::size_t total = grid.lambda1_candidates.size() * nb;

    TuningResult out;
    out.grid.resize(total);
    parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GridScore& g = out.grid[i];
            g.lambda1 = grid.lambda1_candidates[i / nb];
            g.beta = grid.beta_candidates[i % nb];
            PenaltyConfig pen{lambda_schedule(g.lambda1, grid.delta_lambda, grid.K), {}};
            MhrdOptions mo;
            mo.exponent = grid.exponent;
            try {
                const RidgeSet c = mhrd(Rn, grid.K, pen, g.beta, plan, mo);
                g.score = masked_entropy_score(R, c, mask_half_width(grid, c), grid.alpha);
                g.feasible = true;
            } catch (const Infeasible&) {
                g.feasible = false;
                g.score = -std::numeric_limits<double>::infinity();
            }
        }
    });

    const GridScore* best = nullptr;
    for (const GridScore& g : out.grid) {
        if (!g.feasible) continue;
        if (!best || g.score > best->score ||
            (g.score == best->score &&
             (g.lambda1 < best->lambda1 || (g.lambda1 == best->lambda1 && g.beta < best->beta))))
            best = &g;
    }
    if (!best) throw Infeasible(0, 0, "select_params: every grid point is infeasible");
    out.lambda1 = best->lambda1;
    out.beta = best->beta;
    out.score = best->score;
    return out;
}

void write_grid_csv(const std::string& path, const TuningResult& r) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(12) << "lambda1,beta,score,feasible,selected\n";
    for (const GridScore& g : r.grid) {
        const bool sel = g.feasible && g.lambda1 == r.lambda1 && g.beta == r.beta;
        out << g.lambda1 << ',' << g.beta << ',';
        if (g.feasible)
            out << g.score;
        else
            out << "nan";
        out << ',' << (g.feasible ? 1 : 0) << ',' << (sel ? 1 : 0) << '\n';
    }
}

}  // namespace ridgekit
