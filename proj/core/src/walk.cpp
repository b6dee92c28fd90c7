#include "ridgekit/walk.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fft.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/tuning.hpp"

namespace ridgekit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_band_input(const Tfr& S, const RidgeSet& c) {
    if (c.rows.empty()) throw InvalidParameter("ridge set is empty");
    for (const Ridge& r : c.rows)
        if (r.size() != S.rows()) throw InvalidParameter("ridge length does not match the TFR time axis");
}

int to_bins(double hz, double dxi) { return static_cast<int>(std::lround(hz / dxi)); }

// Per-window ratio of two band energies, each window's value written to all of its samples.
IndexSeries window_ratio(const Signal& y, double win_s, double num_lo, double num_hi, double den_lo, double den_hi,
                         bool floored, const char* name) {
    y.validate();
    if (!(y.fs > 16.0)) throw InvalidParameter(std::string(name) + " needs fs > 16 Hz");
    if (!(win_s > 0)) throw InvalidParameter(std::string(name) + " needs a positive window");
    const std::vector<double> num = band_envelope_energy(y, num_lo, num_hi);
    const std::vector<double> den = band_envelope_energy(y, den_lo, den_hi);
    const std::size_t N = y.size();
    const auto W = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(win_s * y.fs)));
    IndexSeries out;
    out.name = name;
    out.larger_is_walking = true;
    out.values.assign(N, 0.0);
    for (std::size_t a = 0; a < N; a += W) {
        const std::size_t b = std::min(N, a + W);
        double en = 0.0, ed = 0.0, total = 0.0;
        for (std::size_t n = a; n < b; ++n) {
            en += num[n];
            ed += den[n];
            total += y.samples[n] * y.samples[n];
        }
        double v = 0.0;
        if (floored) {
            if (en > 0) {
                const double floor = 1e-12 * std::max(total, en + ed);
                v = std::min(1e6, en / std::max(ed, floor));
            }
        } else if (ed > 0) {
            v = en / ed;
        }
        std::fill(out.values.begin() + static_cast<long>(a), out.values.begin() + static_cast<long>(b), v);
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t p = 0;
        while (p < cell.size() && cell[p] == ' ') ++p;
        out.push_back(cell.substr(p));
    }
    return out;
}

}  // namespace

const char* to_string(Activity a) {
    switch (a) {
        case Activity::Walking: return "walking";
        case Activity::NonWalking: return "non-walking";
        case Activity::Other: return "other";
    }
    return "other";
}

Activity activity_from_string(const std::string& s) {
    if (s == "walking" || s == "1") return Activity::Walking;
    if (s == "non-walking" || s == "nonwalking" || s == "0") return Activity::NonWalking;
    if (s == "other" || s == "-1" || s.empty()) return Activity::Other;
    throw InvalidParameter("unknown activity label '" + s + "'");
}

void TriaxialRecording::validate() const {
    if (x.empty()) throw InvalidParameter("recording has no samples");
    if (y.size() != x.size() || z.size() != x.size()) throw InvalidParameter("recording axes differ in length");
    if (!labels.empty() && labels.size() != x.size()) throw InvalidParameter("label count differs from sample count");
    if (!(fs > 0) || !std::isfinite(fs)) throw InvalidParameter("recording sampling rate must be positive");
}

Signal magnitude(const TriaxialRecording& rec) {
    rec.validate();
    std::vector<double> m(rec.size());
    for (std::size_t n = 0; n < m.size(); ++n) m[n] = std::sqrt(rec.x[n] * rec.x[n] + rec.y[n] * rec.y[n] + rec.z[n] * rec.z[n]);
    return Signal(std::move(m), rec.fs);
}

IndexSeries sst_wsi(const Tfr& S, const RidgeSet& c, double b_hz, std::size_t harmonics) {
    check_band_input(S, c);
    if (!(b_hz > 0)) throw InvalidParameter("sst_wsi: band half-width must be positive");
    if (harmonics < 1 || harmonics > c.harmonics()) throw InvalidParameter("sst_wsi: harmonic count exceeds ridge rows");
    const int b = to_bins(b_hz, S.dxi);
    const auto M = static_cast<int>(S.cols());
    IndexSeries out;
    out.name = "sst-wsi";
    out.larger_is_walking = true;
    out.values.assign(S.rows(), 0.0);
    for (std::size_t l = 0; l < S.rows(); ++l) {
        double total = 0.0;
        for (std::size_t q = 0; q < S.cols(); ++q) total += std::abs(S.values(l, q));
        if (!(total > 0)) continue;
        double num = 0.0;
        for (std::size_t k = 0; k < harmonics; ++k) {
            const int centre = c.rows[k].bins[l];
            const int lo = std::max(1, centre - b);
            const int hi = std::min(M, centre + b);
            cplx acc{};
            for (int q = lo; q <= hi; ++q) acc += S.values(l, static_cast<std::size_t>(q - 1));
            num += std::abs(acc);
        }
        out.values[l] = num / total;
    }
    return out;
}

std::vector<double> running_median(const std::vector<double>& x, std::size_t width) {
    const std::size_t N = x.size();
    if (width <= 1 || N == 0) return x;
    const std::size_t half = width / 2;
    std::vector<double> out(N);
    // two multisets split at the median; windows shrink at the edges
    std::multiset<double> lo, hi;
    auto rebalance = [&] {
        while (lo.size() > hi.size() + 1) {
            hi.insert(*std::prev(lo.end()));
            lo.erase(std::prev(lo.end()));
        }
        while (hi.size() > lo.size()) {
            lo.insert(*hi.begin());
            hi.erase(hi.begin());
        }
    };
    auto add = [&](double v) {
        if (lo.empty() || v <= *std::prev(lo.end()))
            lo.insert(v);
        else
            hi.insert(v);
        rebalance();
    };
    auto remove = [&](double v) {
        auto it = lo.find(v);
        if (it != lo.end())
            lo.erase(it);
        else
            hi.erase(hi.find(v));
        rebalance();
    };
    std::size_t a = 0, b = 0;  // current window [a, b)
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t na = n >= half ? n - half : 0;
        const std::size_t nb = std::min(N, n + half + 1);
        while (b < nb) add(x[b++]);
        while (a < na) remove(x[a++]);
        out[n] = lo.size() > hi.size() ? *std::prev(lo.end()) : 0.5 * (*std::prev(lo.end()) + *hi.begin());
    }
    return out;
}

IndexSeries entropy_ratio_index(const Tfr& S, const RidgeSet& c, double alpha, double mask_band_hz,
                                double med_win_s) {
    check_band_input(S, c);
    if (!(alpha > 0) || alpha == 1.0) throw InvalidParameter("entropy_ratio_index: alpha must be positive and not 1");
    if (mask_band_hz < 0 || med_win_s < 0) throw InvalidParameter("entropy_ratio_index: negative band or window");
    const Tfr masked = mask_ridges(S, c, to_bins(mask_band_hz, S.dxi));
    const std::size_t N = S.rows(), M = S.cols();
    std::vector<double> ratio(N, 0.0), full(M), part(M);
    for (std::size_t l = 0; l < N; ++l) {
        double tf = 0.0, tp = 0.0;
        for (std::size_t q = 0; q < M; ++q) {
            tf += full[q] = std::abs(S.values(l, q));
            tp += part[q] = std::abs(masked.values(l, q));
        }
        if (!(tp > 0) || !(tf > 0)) continue;
        const double qv = renyi_entropy(part, alpha);
        if (!(qv > 0)) continue;  // a single surviving bin: treat like a fully masked row
        ratio[l] = renyi_entropy(full, alpha) / qv;
    }
    IndexSeries out;
    out.name = "entropy-ratio";
    out.larger_is_walking = false;
    const auto width = static_cast<std::size_t>(std::lround(med_win_s / S.dt));
    out.values = running_median(ratio, std::max<std::size_t>(1, width));
    return out;
}

std::vector<double> band_envelope_energy(const Signal& y, double lo_hz, double hi_hz) {
    y.validate();
    if (!(lo_hz >= 0) || !(hi_hz > lo_hz)) throw InvalidParameter("band edges must satisfy 0 <= lo < hi");
    const std::size_t N = y.size();
    detail::ForwardFft fwd(N);
    detail::InverseFft bwd(N);
    for (std::size_t n = 0; n < N; ++n) fwd.data()[n] = y.samples[n];
    fwd.execute();
    // analytic band-pass: keep positive frequencies in [lo, hi], doubled
    const double df = y.fs / static_cast<double>(N);
    for (std::size_t m = 0; m < N; ++m) {
        const double f = static_cast<double>(m) * df;
        const bool keep = m > 0 && 2 * m < N && f >= lo_hz && f <= hi_hz;
        bwd.data()[m] = keep ? 2.0 * fwd.data()[m] : cplx{};
    }
    bwd.execute();
    std::vector<double> e(N);
    const double scale = 1.0 / static_cast<double>(N);
    for (std::size_t n = 0; n < N; ++n) e[n] = std::norm(bwd.data()[n] * scale);
    return e;
}

IndexSeries hilbert_wsi(const Signal& y, double win_s) {
    return window_ratio(y, win_s, 0.5, 3.0, 0.3, 8.0, false, "hilbert");
}

IndexSeries fog_wsi(const Signal& y, double win_s) { return window_ratio(y, win_s, 0.5, 3.0, 3.0, 8.0, true, "fog"); }

const char* to_string(IndexKind k) {
    switch (k) {
        case IndexKind::SstWsi: return "sst-wsi";
        case IndexKind::EntropyRatio: return "entropy-ratio";
        case IndexKind::Hilbert: return "hilbert";
        case IndexKind::Fog: return "fog";
    }
    return "sst-wsi";
}

IndexKind index_from_string(const std::string& s) {
    if (s == "sst-wsi" || s == "sst_wsi") return IndexKind::SstWsi;
    if (s == "entropy-ratio" || s == "entropy_ratio") return IndexKind::EntropyRatio;
    if (s == "hilbert" || s == "hilbert-wsi") return IndexKind::Hilbert;
    if (s == "fog" || s == "fog-wsi") return IndexKind::Fog;
    throw InvalidParameter("unknown index '" + s + "'");
}

TfrConfig WalkConfig::default_tfr() {
    TfrConfig t;
    t.dxi_hz = 0.05;
    t.max_hz = 25.0;
    t.nominal_hz = 2.0;
    t.window_cycles = 10.0;
    return t;
}

WalkRidges walk_ridges(const Signal& mag, const WalkConfig& cfg) {
    if (cfg.K < 1 || cfg.Q < cfg.K) throw InvalidParameter("walk ridges need 1 <= K <= Q");
    Signal y = mag;
    if (cfg.demean) {
        double mean = 0.0;
        for (double v : y.samples) mean += v;
        mean /= static_cast<double>(y.size());
        for (double& v : y.samples) v -= mean;
    }
    WalkRidges out;
    out.S = sst2(y, cfg.tfr.window(y.fs), cfg.tfr.options(y.fs));
    if (!(out.S.max_abs() > 0)) throw DegenerateInput("walk: recording has no oscillatory energy");
    const NormalizedTfr Rn = normalize_tfr(out.S);
    const double dxi = out.S.dxi;
    MhrdOptions mo;
    mo.fundamental_min = std::max(1, static_cast<int>(std::ceil(cfg.fundamental_min_hz / dxi)));
    mo.fundamental_max = static_cast<int>(std::floor(cfg.fundamental_max_hz / dxi));
    PenaltyConfig pen{lambda_schedule(cfg.lambda1, cfg.delta_lambda, cfg.K), {}};
    const RidgeSet joint = mhrd(Rn, cfg.K, pen, cfg.beta, default_plan(y.size(), y.dt(), dxi), mo);
    if (cfg.Q == cfg.K) {
        out.ridges = joint;
        return out;
    }
    // linear decay would reach zero before Q rows; extend the last joint penalty instead
    PenaltyConfig ext;
    ext.lambda = pen.lambda;
    ext.lambda.resize(cfg.Q, pen.lambda.back());
    RidgeSet extra = mhrd_conditioned(Rn, joint.fundamental(), cfg.Q, ext, cfg.beta);
    for (std::size_t k = 0; k < cfg.K; ++k) extra.rows[k] = joint.rows[k];
    out.ridges = std::move(extra);
    return out;
}

IndexSeries compute_index(IndexKind kind, const TriaxialRecording& rec, const WalkConfig& cfg) {
    const Signal y = magnitude(rec);
    switch (kind) {
        case IndexKind::Hilbert: return hilbert_wsi(y, cfg.window_s);
        case IndexKind::Fog: return fog_wsi(y, cfg.window_s);
        case IndexKind::SstWsi: {
            const WalkRidges w = walk_ridges(y, cfg);
            return sst_wsi(w.S, w.ridges, cfg.b_hz, cfg.Q);
        }
        case IndexKind::EntropyRatio: {
            const WalkRidges w = walk_ridges(y, cfg);
            return entropy_ratio_index(w.S, w.ridges, cfg.alpha, cfg.mask_band_hz, cfg.median_s);
        }
    }
    throw InvalidParameter("unknown index");
}

double Confusion::accuracy() const {
    const std::size_t n = tp + fp + tn + fn;
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double Confusion::f1() const {
    if (tp == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

Confusion score_threshold(const IndexSeries& idx, const std::vector<Activity>& labels, double threshold) {
    if (labels.size() != idx.values.size()) throw InvalidParameter("index and labels differ in length");
    Confusion c;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (labels[n] == Activity::Other) continue;
        const bool pred = idx.larger_is_walking ? idx.values[n] >= threshold : idx.values[n] <= threshold;
        const bool truth = labels[n] == Activity::Walking;
        if (pred && truth) ++c.tp;
        else if (pred) ++c.fp;
        else if (truth) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double fit_threshold(const std::vector<const IndexSeries*>& series,
                     const std::vector<const std::vector<Activity>*>& labels) {
    if (series.empty() || series.size() != labels.size()) throw InvalidParameter("fit_threshold: bad training fold");
    std::vector<double> pool;
    for (std::size_t i = 0; i < series.size(); ++i)
        for (std::size_t n = 0; n < series[i]->values.size(); ++n)
            if ((*labels[i])[n] != Activity::Other) pool.push_back(series[i]->values[n]);
    if (pool.empty()) throw InvalidParameter("fit_threshold: no labelled training samples");
    std::sort(pool.begin(), pool.end());
    constexpr std::size_t kQuantiles = 200;
    double best_thr = pool.front();
    double best_f1 = -1.0;
    for (std::size_t i = 0; i < kQuantiles; ++i) {
        const double pos = static_cast<double>(i) / static_cast<double>(kQuantiles - 1) * static_cast<double>(pool.size() - 1);
        const double thr = pool[static_cast<std::size_t>(std::lround(pos))];
        Confusion total;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const Confusion c = score_threshold(*series[s], *labels[s], thr);
            total.tp += c.tp;
            total.fp += c.fp;
            total.tn += c.tn;
            total.fn += c.fn;
        }
        if (total.f1() > best_f1) {
            best_f1 = total.f1();
            best_thr = thr;
        }
    }
    return best_thr;
}

EvalReport losocv_threshold(const std::vector<IndexSeries>& series, const std::vector<TriaxialRecording>& recs) {
    if (recs.size() < 2) throw InvalidParameter("losocv needs at least two subjects");
    if (series.size() != recs.size()) throw InvalidParameter("losocv: one index series per recording");
    EvalReport rep;
    rep.index = series.front().name;
    std::size_t used = 0;
    for (std::size_t test = 0; test < recs.size(); ++test) {
        SubjectResult sr;
        sr.subject_id = recs[test].subject_id;
        std::vector<const IndexSeries*> train;
        std::vector<const std::vector<Activity>*> train_labels;
        bool walk = false, rest = false;
        for (std::size_t s = 0; s < recs.size(); ++s) {
            if (s == test) continue;
            if (recs[s].labels.empty()) throw InvalidParameter("losocv: recording " + recs[s].subject_id + " is unlabelled");
            train.push_back(&series[s]);
            train_labels.push_back(&recs[s].labels);
            for (Activity a : recs[s].labels) {
                walk = walk || a == Activity::Walking;
                rest = rest || a == Activity::NonWalking;
            }
        }
        if (!walk || !rest) {
            std::cerr << "warning: skipping subject " << sr.subject_id << ": training labels hold a single class\n";
            sr.skipped = true;
            rep.subjects.push_back(sr);
            continue;
        }
        sr.threshold = fit_threshold(train, train_labels);
        // the held-out labels are read only here, after the threshold is fixed
        const Confusion c = score_threshold(series[test], recs[test].labels, sr.threshold);
        sr.tp = c.tp;
        sr.fp = c.fp;
        sr.tn = c.tn;
        sr.fn = c.fn;
        sr.accuracy = c.accuracy();
        sr.f1 = c.f1();
        rep.mean_accuracy += sr.accuracy;
        rep.mean_f1 += sr.f1;
        ++used;
        rep.subjects.push_back(sr);
    }
    if (used > 0) {
        rep.mean_accuracy /= static_cast<double>(used);
        rep.mean_f1 /= static_cast<double>(used);
    }
    return rep;
}

EvalReport losocv_threshold(const std::vector<TriaxialRecording>& recs, IndexKind kind, const WalkConfig& cfg) {
    std::vector<IndexSeries> series(recs.size());
    parallel_for(recs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) series[i] = compute_index(kind, recs[i], cfg);
    });
    EvalReport r = losocv_threshold(series, recs);
    r.index = to_string(kind);
    return r;
}

std::string report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["index"] = r.index;
    j["mean_accuracy"] = r.mean_accuracy;
    j["mean_f1"] = r.mean_f1;
    j["subjects"] = nlohmann::json::array();
    for (const SubjectResult& s : r.subjects) {
        nlohmann::json o;
        o["subject"] = s.subject_id;
        o["skipped"] = s.skipped;
        o["accuracy"] = s.accuracy;
        o["f1"] = s.f1;
        o["threshold"] = s.threshold;
        o["confusion"] = {{"tp", s.tp}, {"fp", s.fp}, {"tn", s.tn}, {"fn", s.fn}};
        j["subjects"].push_back(o);
    }
    return j.dump(2);
}

TriaxialRecording read_recording_csv(const std::string& path, const std::string& subject_id) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    const auto head = split_csv(line);
    auto col = [&](const std::string& name) -> long {
        const auto it = std::find(head.begin(), head.end(), name);
        return it == head.end() ? -1 : static_cast<long>(it - head.begin());
    };
    const long ct = col("time_s"), cx = col("x"), cy = col("y"), cz = col("z"), cl = col("label");
    if (ct < 0 || cx < 0 || cy < 0 || cz < 0) throw IoError(path + ": expected columns time_s,x,y,z[,label]");
    TriaxialRecording rec;
    rec.subject_id = subject_id.empty() ? std::filesystem::path(path).stem().string() : subject_id;
    std::vector<double> t;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv(line);
        const long need = std::max({ct, cx, cy, cz, cl});
        if (static_cast<long>(cells.size()) <= need)
            throw IoError(path + ":" + std::to_string(lineno) + ": missing columns");
        try {
            t.push_back(std::stod(cells[static_cast<std::size_t>(ct)]));
            rec.x.push_back(std::stod(cells[static_cast<std::size_t>(cx)]));
            rec.y.push_back(std::stod(cells[static_cast<std::size_t>(cy)]));
            rec.z.push_back(std::stod(cells[static_cast<std::size_t>(cz)]));
        } catch (const std::exception&) {
            throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
        }
        if (cl >= 0) rec.labels.push_back(activity_from_string(cells[static_cast<std::size_t>(cl)]));
    }
    if (t.size() < 2) throw IoError(path + ": need at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0)) throw IoError(path + ": time column must increase");
    rec.fs = 1.0 / dt;
    rec.validate();
    return rec;
}

void write_recording_csv(const std::string& path, const TriaxialRecording& rec) {
    rec.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(10) << "time_s,x,y,z,label\n";
    for (std::size_t n = 0; n < rec.size(); ++n) {
        out << static_cast<double>(n) / rec.fs << ',' << rec.x[n] << ',' << rec.y[n] << ',' << rec.z[n] << ','
            << (rec.labels.empty() ? "other" : to_string(rec.labels[n])) << '\n';
    }
}

std::vector<TriaxialRecording> read_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(dir + ": no CSV recordings");
    std::vector<TriaxialRecording> out;
    for (const auto& f : files) out.push_back(read_recording_csv(f.string()));
    return out;
}

void write_index_csv(const std::string& path, const IndexSeries& idx, double fs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(12) << "time_s," << idx.name << '\n';
    for (std::size_t n = 0; n < idx.values.size(); ++n) out << static_cast<double>(n) / fs << ',' << idx.values[n] << '\n';
}

std::vector<TriaxialRecording> synthetic_corpus(const SyntheticCorpusSpec& spec) {
    if (spec.subjects < 1 || !(spec.fs > 0) || !(spec.duration_s > 0)) throw InvalidParameter("bad corpus spec");
    if (!(spec.walk_min_s > 0) || spec.walk_max_s < spec.walk_min_s || !(spec.rest_min_s > 0) ||
        spec.rest_max_s < spec.rest_min_s)
        throw InvalidParameter("corpus segment lengths must be positive and ordered");
    std::vector<TriaxialRecording> out;
    for (std::size_t s = 0; s < spec.subjects; ++s) {
        std::mt19937_64 rng(spec.seed * 1000003ULL + s);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const auto N = static_cast<std::size_t>(std::lround(spec.duration_s * spec.fs));
        TriaxialRecording rec;
        rec.fs = spec.fs;
        rec.subject_id = "subject" + std::to_string(s + 1);
        rec.x.assign(N, 0.0);
        rec.y.assign(N, 0.0);
        rec.z.assign(N, 1.0);  // gravity
        rec.labels.assign(N, Activity::NonWalking);
        // per-subject harmonic mix and axis split
        const double h2 = 0.4 + 0.3 * unif(rng);
        const double h3 = 0.2 + 0.2 * unif(rng);
        const double tilt = 0.2 + 0.3 * unif(rng);
        std::size_t n = 0;
        bool walking = unif(rng) < 0.5;
        while (n < N) {
            const double len_s = walking ? spec.walk_min_s + (spec.walk_max_s - spec.walk_min_s) * unif(rng)
                                         : spec.rest_min_s + (spec.rest_max_s - spec.rest_min_s) * unif(rng);
            const std::size_t end = std::min(N, n + static_cast<std::size_t>(std::lround(len_s * spec.fs)));
            if (walking) {
                const double f = spec.step_hz + spec.step_jitter_hz * (2.0 * unif(rng) - 1.0);
                const double drift = 0.05 * (2.0 * unif(rng) - 1.0);  // Hz over the burst
                const double ph0 = unif(rng);
                double phase = ph0;
                for (std::size_t i = n; i < end; ++i) {
                    const double u = static_cast<double>(i - n) / static_cast<double>(std::max<std::size_t>(1, end - n));
                    phase += (f + drift * u) / spec.fs;
                    const double w = std::cos(kTwoPi * phase) + h2 * std::cos(2.0 * kTwoPi * phase + 0.7) +
                                     h3 * std::cos(3.0 * kTwoPi * phase + 1.9);
                    rec.z[i] += spec.walk_amp_g * w;
                    rec.x[i] += tilt * spec.walk_amp_g * w;
                    rec.labels[i] = Activity::Walking;
                }
                const std::size_t other_end = std::min(N, end + static_cast<std::size_t>(std::lround(spec.other_s * spec.fs)));
                for (std::size_t i = end; i < other_end; ++i) rec.labels[i] = Activity::Other;
            }
            n = end;
            walking = !walking;
        }
        for (std::size_t i = 0; i < N; ++i) {
            rec.x[i] += spec.noise_g * gauss(rng);
            rec.y[i] += spec.noise_g * gauss(rng);
            rec.z[i] += spec.noise_g * gauss(rng);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace ridgekit
