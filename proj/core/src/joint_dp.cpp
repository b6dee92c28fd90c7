#include "joint_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "ridgekit/errors.hpp"
#include "ridgekit/path_dp.hpp"

namespace ridgekit::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Absorbs rounding in beta * c1 so that exact band edges are admitted.
constexpr double kBandSlack = 1e-9;

// Lists of (value, index) per key, stored contiguously.
struct Csr {
    std::vector<std::size_t> begin;  // size keys + 1
    std::vector<int> value;
    std::vector<int> index;
};

}  // namespace

Band harmonic_band(int k, int c1, double beta, int M) {
    const double centre = static_cast<double>(k) * c1;
    const double half = beta * c1;
    int lo = static_cast<int>(std::ceil(centre - half - kBandSlack));
    int hi = static_cast<int>(std::floor(centre + half + kBandSlack));
    if (k == 1) lo = hi = c1;
    lo = std::max(lo, 1);
    hi = std::min(hi, M);
    return {lo, hi};
}

std::vector<std::vector<int>> solve_joint_segment(const JointSegment& seg) {
    const std::size_t K = seg.K;
    const Grid<double>& scores = *seg.scores;
    if (K < 1 || seg.lambda.size() < K) throw InvalidParameter("joint solve needs K >= 1 and K penalties");
    if (seg.row_end <= seg.row_begin) throw InvalidParameter("joint solve needs a non-empty segment");

    // admissible fundamentals and their bands
    std::vector<int> c1s;
    std::vector<std::vector<Band>> bands;
    int first_bad_k = 1;
    for (int c1 = std::max(seg.c1_lo, 1); c1 <= std::min(seg.c1_hi, seg.M); ++c1) {
        std::vector<Band> b(K + 1);
        bool ok = true;
        for (std::size_t k = 1; k <= K; ++k) {
            b[k] = harmonic_band(static_cast<int>(k), c1, seg.beta, seg.M);
            if (b[k].lo > b[k].hi) {
                if (c1s.empty() && ok) first_bad_k = static_cast<int>(k);
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        c1s.push_back(c1);
        bands.push_back(std::move(b));
    }
    if (c1s.empty())
        throw Infeasible(seg.row_begin, first_bad_k,
                         "no fundamental bin admits every harmonic band (time index " +
                             std::to_string(seg.row_begin) + ", harmonic " + std::to_string(first_bad_k) + ")");

    // Prefix levels P_0..P_K. Element e of level j carries its fundamental
    // index; its children in level j+1 are contiguous.
    std::vector<std::vector<int>> pref_c1(K + 1);
    std::vector<std::vector<int>> child_begin(K + 1);
    std::vector<std::vector<int>> state_vals(K + 1);  // last coordinate of each prefix
    pref_c1[0] = {-1};
    for (std::size_t i = 0; i < c1s.size(); ++i) {
        pref_c1[1].push_back(static_cast<int>(i));
        state_vals[1].push_back(c1s[i]);
    }
    child_begin[0] = {0};
    for (std::size_t j = 1; j < K; ++j) {
        for (std::size_t e = 0; e < pref_c1[j].size(); ++e) {
            const int ci = pref_c1[j][e];
            child_begin[j].push_back(static_cast<int>(pref_c1[j + 1].size()));
            const Band b = bands[static_cast<std::size_t>(ci)][j + 1];
            for (int x = b.lo; x <= b.hi; ++x) {
                pref_c1[j + 1].push_back(ci);
                state_vals[j + 1].push_back(x);
            }
        }
    }
    const std::size_t F = pref_c1[K].size();

    // full tuples of level K (the feasible states), recovered level by level
    std::vector<int> tuples(F * K);
    {
        // parent[j][e]: the level j-1 element that spawned e
        std::vector<std::vector<std::size_t>> parent(K + 1);
        parent[1].assign(pref_c1[1].size(), 0);
        for (std::size_t j = 1; j < K; ++j) {
            parent[j + 1].resize(pref_c1[j + 1].size());
            for (std::size_t e = 0; e < pref_c1[j].size(); ++e) {
                const std::size_t b = static_cast<std::size_t>(child_begin[j][e]);
                const std::size_t end =
                    e + 1 < pref_c1[j].size() ? static_cast<std::size_t>(child_begin[j][e + 1]) : pref_c1[j + 1].size();
                for (std::size_t c = b; c < end; ++c) parent[j + 1][c] = e;
            }
        }
        for (std::size_t s = 0; s < F; ++s) {
            std::size_t e = s;
            for (std::size_t j = K; j >= 1; --j) {
                tuples[s * K + (j - 1)] = state_vals[j][e];
                e = parent[j][e];
            }
        }
    }
    auto child_count = [&](std::size_t j, std::size_t e) -> std::size_t {
        if (j == 0) return c1s.size();
        const std::size_t b = static_cast<std::size_t>(child_begin[j][e]);
        const std::size_t end = e + 1 < pref_c1[j].size() ? static_cast<std::size_t>(child_begin[j][e + 1])
                                                           : pref_c1[j + 1].size();
        return end - b;
    };

    // Suffix sets T_1..T_{K+1}: suf[j][s] is the index of (x_j..x_K) of state s.
    std::vector<std::vector<int>> suf(K + 2, std::vector<int>(F, 0));
    std::vector<std::size_t> nT(K + 2, 0);
    std::vector<Csr> parents(K + 1);  // parents[j]: for each t' in T_{j+1}, the (x_j, t) pairs
    nT[K + 1] = 1;
    for (std::size_t j = K; j >= 1; --j) {
        std::vector<std::tuple<int, int, std::size_t>> keys;  // (t', x_j, state)
        keys.reserve(F);
        for (std::size_t s = 0; s < F; ++s) keys.emplace_back(suf[j + 1][s], tuples[s * K + (j - 1)], s);
        if (j > 1) std::sort(keys.begin(), keys.end());
        else
            std::stable_sort(keys.begin(), keys.end(),
                             [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });

        std::vector<std::pair<int, int>> entries;  // (t', t) in key order
        std::size_t count = 0;
        std::vector<int> xvals;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const auto [tp, x, s] = keys[i];
            if (j == 1) {
                suf[j][s] = static_cast<int>(s);
            } else {
                const bool same = i > 0 && std::get<0>(keys[i - 1]) == tp && std::get<1>(keys[i - 1]) == x;
                if (!same) ++count;
                suf[j][s] = static_cast<int>(count - 1);
                if (same) continue;
            }
            entries.emplace_back(tp, suf[j][s]);
            xvals.push_back(x);
        }
        Csr& csr = parents[j];
        csr.begin.assign(nT[j + 1] + 1, 0);
        for (const auto& e : entries) ++csr.begin[static_cast<std::size_t>(e.first) + 1];
        for (std::size_t t = 0; t < nT[j + 1]; ++t) csr.begin[t + 1] += csr.begin[t];
        csr.value = std::move(xvals);
        csr.index.resize(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) csr.index[i] = entries[i].second;
        nT[j] = (j == 1) ? F : count;
    }

    const std::size_t T = seg.row_end - seg.row_begin;
    auto unary = [&](std::size_t row, std::size_t s) {
        double u = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            u += scores(row, static_cast<std::size_t>(tuples[s * K + k] - 1));
        return u;
    };

    std::vector<double> V(F);
    if (!seg.pinned.empty()) {
        if (seg.pinned.size() != K) throw InvalidParameter("pinned state must have K entries");
        std::size_t hit = F;
        for (std::size_t s = 0; s < F && hit == F; ++s)
            if (std::equal(seg.pinned.begin(), seg.pinned.end(), tuples.begin() + static_cast<long>(s * K)))
                hit = s;
        if (hit == F) throw InvalidParameter("pinned state lies outside the segment's feasible set");
        std::fill(V.begin(), V.end(), kNegInf);
        V[hit] = unary(seg.row_begin, hit);
    } else {
        for (std::size_t s = 0; s < F; ++s) V[s] = unary(seg.row_begin, s);
    }

    // layer tables G_j and argmax tables A_j, j = 1..K, sized |P_{j-1}| x |T_j|
    std::vector<std::vector<double>> G(K + 2);
    std::vector<std::vector<int>> A(K + 1);
    for (std::size_t j = 1; j <= K; ++j) {
        G[j].resize(pref_c1[j - 1].size() * nT[j]);
        A[j].resize(G[j].size());
    }
    std::vector<int> back(T > 1 ? (T - 1) * F : 0);

    EnvelopeWorkspace ws;
    std::vector<int> xs;
    std::vector<double> f;
    std::vector<double> best;
    std::vector<int> arg;

    for (std::size_t l = 1; l < T; ++l) {
        const std::size_t row = seg.row_begin + l;
        G[K + 1].assign(V.begin(), V.end());
        for (std::size_t j = K; j >= 1; --j) {
            const std::vector<double>& next = G[j + 1];
            const std::size_t nNext = nT[j + 1];
            const Csr& csr = parents[j];
            for (std::size_t p = 0; p < pref_c1[j - 1].size(); ++p) {
                const std::size_t cb = j == 1 ? 0 : static_cast<std::size_t>(child_begin[j - 1][p]);
                const std::size_t cc = child_count(j - 1, p);
                xs.resize(cc);
                for (std::size_t i = 0; i < cc; ++i) xs[i] = state_vals[j][cb + i];
                f.resize(cc);
                for (std::size_t tp = 0; tp < nNext; ++tp) {
                    bool any = false;
                    for (std::size_t i = 0; i < cc; ++i) {
                        f[i] = next[(cb + i) * nNext + tp];
                        any = any || f[i] > kNegInf;
                    }
                    const std::size_t b = csr.begin[tp];
                    const std::size_t n = csr.begin[tp + 1] - b;
                    double* out = G[j].data() + p * nT[j];
                    int* aout = A[j].data() + p * nT[j];
                    if (!any) {
                        for (std::size_t i = 0; i < n; ++i) {
                            out[csr.index[b + i]] = kNegInf;
                            aout[csr.index[b + i]] = -1;
                        }
                        continue;
                    }
                    best.resize(n);
                    arg.resize(n);
                    quadratic_max_transform(xs, f, std::span<const int>(csr.value.data() + b, n), seg.lambda[j - 1],
                                            best, arg, ws);
                    for (std::size_t i = 0; i < n; ++i) {
                        out[csr.index[b + i]] = best[i];
                        aout[csr.index[b + i]] = arg[i] < 0 ? -1 : static_cast<int>(cb) + arg[i];
                    }
                }
            }
        }
        int* bl = back.data() + (l - 1) * F;
        for (std::size_t s = 0; s < F; ++s) {
            int p = 0;
            for (std::size_t j = 1; j <= K; ++j) p = A[j][static_cast<std::size_t>(p) * nT[j] + static_cast<std::size_t>(suf[j][s])];
            bl[s] = p;
            V[s] = G[1][s] + unary(row, s);
        }
    }

    std::size_t top = 0;
    for (std::size_t s = 1; s < F; ++s)
        if (V[s] > V[top]) top = s;

    std::vector<std::vector<int>> out(T, std::vector<int>(K));
    std::size_t s = top;
    for (std::size_t l = T; l-- > 0;) {
        std::copy_n(tuples.begin() + static_cast<long>(s * K), K, out[l].begin());
        if (l > 0) s = static_cast<std::size_t>(back[(l - 1) * F + s]);
    }
    return out;
}

}  // namespace ridgekit::detail
