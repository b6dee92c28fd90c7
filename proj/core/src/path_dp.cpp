#include "ridgekit/path_dp.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "ridgekit/errors.hpp"

namespace ridgekit {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void quadratic_max_transform(std::span<const int> xs, std::span<const double> f, std::span<const int> ts,
                             double lambda, std::span<double> best, std::span<int> arg,
                             EnvelopeWorkspace& ws) {
    if (lambda <= 0.0) {
        int top = -1;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (f[i] > kNegInf && (top < 0 || f[i] > f[static_cast<std::size_t>(top)])) top = static_cast<int>(i);
        const double v = top < 0 ? kNegInf : f[static_cast<std::size_t>(top)];
        for (std::size_t t = 0; t < ts.size(); ++t) {
            best[t] = v;
            arg[t] = top;
        }
        return;
    }

    auto& hull = ws.hull;
    auto& breaks = ws.breaks;
    hull.clear();
    breaks.clear();
    // t beyond which parabola i beats parabola j (xs[j] < xs[i]); equal at the returned point
    auto crossing = [&](int j, int i) {
        const double xj = xs[static_cast<std::size_t>(j)];
        const double xi = xs[static_cast<std::size_t>(i)];
        return 0.5 * ((f[static_cast<std::size_t>(j)] - f[static_cast<std::size_t>(i)]) / (lambda * (xi - xj)) + xj + xi);
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(f[i] > kNegInf)) continue;
        const int ii = static_cast<int>(i);
        double s = kNegInf;
        while (!hull.empty()) {
            s = crossing(hull.back(), ii);
            if (hull.size() > 1 && s <= breaks.back()) {
                hull.pop_back();
                breaks.pop_back();
                continue;
            }
            break;
        }
        breaks.push_back(hull.empty() ? kNegInf : s);
        hull.push_back(ii);
    }

    if (hull.empty()) {
        for (std::size_t t = 0; t < ts.size(); ++t) {
            best[t] = kNegInf;
            arg[t] = -1;
        }
        return;
    }

    auto value = [&](int i, int t) {
        const double d = static_cast<double>(t - xs[static_cast<std::size_t>(i)]);
        return f[static_cast<std::size_t>(i)] - lambda * d * d;
    };
    std::size_t k = 0;
    for (std::size_t t = 0; t < ts.size(); ++t) {
        const int target = ts[t];
        while (k + 1 < hull.size() && breaks[k + 1] < static_cast<double>(target)) ++k;
        // re-check neighbours directly so rounding in the breakpoints cannot
        // pick a strictly worse parabola; ties go to the lower source
        int pick = hull[k];
        double v = value(pick, target);
        const std::size_t lo = k > 0 ? k - 1 : 0;
        const std::size_t hi = std::min(hull.size() - 1, k + 1);
        for (std::size_t c = lo; c <= hi; ++c) {
            const int cand = hull[c];
            const double cv = value(cand, target);
            if (cv > v || (cv == v && cand < pick)) {
                v = cv;
                pick = cand;
            }
        }
        best[t] = v;
        arg[t] = pick;
    }
}

ChainSolution solve_chain(const ChainProblem& problem) {
    const std::size_t T = problem.lo.size();
    if (T == 0 || problem.hi.size() != T) throw InvalidParameter("chain problem needs matching, non-empty bounds");
    for (std::size_t l = 0; l < T; ++l)
        if (problem.hi[l] < problem.lo[l]) throw InvalidParameter("chain problem has an empty bin range");

    std::vector<std::size_t> offset(T + 1, 0);
    for (std::size_t l = 0; l < T; ++l)
        offset[l + 1] = offset[l] + static_cast<std::size_t>(problem.hi[l] - problem.lo[l] + 1);
    std::vector<int> back(offset[T], -1);

    EnvelopeWorkspace ws;
    std::vector<int> xs, ts;
    std::vector<double> prev, cur, best;
    std::vector<int> arg;

    auto fill_positions = [](std::vector<int>& v, int lo, int hi) {
        v.resize(static_cast<std::size_t>(hi - lo + 1));
        std::iota(v.begin(), v.end(), lo);
    };

    fill_positions(xs, problem.lo[0], problem.hi[0]);
    prev.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) prev[i] = problem.unary(0, xs[i]);

    for (std::size_t l = 1; l < T; ++l) {
        fill_positions(ts, problem.lo[l], problem.hi[l]);
        best.resize(ts.size());
        arg.resize(ts.size());
        quadratic_max_transform(xs, prev, ts, problem.lambda, best, arg, ws);
        cur.resize(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            cur[i] = best[i] + problem.unary(l, ts[i]);
            back[offset[l] + i] = arg[i];
        }
        std::swap(prev, cur);
        std::swap(xs, ts);
    }

    std::size_t top = 0;
    for (std::size_t i = 1; i < prev.size(); ++i)
        if (prev[i] > prev[top]) top = i;

    ChainSolution sol;
    sol.objective = prev[top];
    sol.path.resize(T);
    std::size_t idx = top;
    for (std::size_t l = T; l-- > 0;) {
        sol.path[l] = problem.lo[l] + static_cast<int>(idx);
        if (l > 0) idx = static_cast<std::size_t>(back[offset[l] + idx]);
    }
    return sol;
}

}  // namespace ridgekit
