#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ridgekit/decompose.hpp"
#include "ridgekit/ridge.hpp"
#include "ridgekit/tfa.hpp"

namespace ridgekit {

enum class Activity { Walking, NonWalking, Other };

const char* to_string(Activity a);
// Accepts walking/non-walking/other (also 1/0/-1).
Activity activity_from_string(const std::string& s);

struct TriaxialRecording {
    std::vector<double> x, y, z;  // g
    double fs = 100.0;
    std::string subject_id;
    std::vector<Activity> labels;  // per sample; may be empty when unannotated

    std::size_t size() const noexcept { return x.size(); }
    void validate() const;
};

struct IndexSeries {
    std::vector<double> values;
    std::string name;
    bool larger_is_walking = true;
};

// Pointwise Euclidean norm of the three axes.
Signal magnitude(const TriaxialRecording& rec);

// sum_k |sum_{q in band k} S(l,q)| / sum_q |S(l,q)|, bands [c_k(l) - b, c_k(l) + b] clipped to the axis.
IndexSeries sst_wsi(const Tfr& S, const RidgeSet& c, double b_hz, std::size_t harmonics);

// Running median (window med_win_s) of Renyi(|S(l,.)|) / Renyi(masked row). A fully
// masked row gives 0.
IndexSeries entropy_ratio_index(const Tfr& S, const RidgeSet& c, double alpha, double mask_band_hz,
                                double med_win_s);

// Centred running median over `width` samples (shrinking at the edges).
std::vector<double> running_median(const std::vector<double>& x, std::size_t width);

// Energy ratio (0.5-3 Hz) / (0.3-8 Hz) of band-limited analytic envelopes, per window.
IndexSeries hilbert_wsi(const Signal& y, double win_s);

// Energy ratio (0.5-3 Hz) / (3-8 Hz); denominator floored at 1e-12 of the window energy, capped at 1e6.
IndexSeries fog_wsi(const Signal& y, double win_s);

// Squared analytic envelope of the ideal band-pass [lo_hz, hi_hz] of y.
std::vector<double> band_envelope_energy(const Signal& y, double lo_hz, double hi_hz);

enum class IndexKind { SstWsi, EntropyRatio, Hilbert, Fog };

const char* to_string(IndexKind k);
IndexKind index_from_string(const std::string& s);

struct WalkConfig {
    TfrConfig tfr = default_tfr();
    std::size_t K = 3;          // harmonics found jointly
    std::size_t Q = 8;          // ridge rows consumed by the indices
    double beta = 0.0625;
    double lambda1 = 1.0;
    double delta_lambda = 0.1;
    double fundamental_min_hz = 0.5;
    double fundamental_max_hz = 3.0;
    double b_hz = 0.08;
    double alpha = 2.4;
    double mask_band_hz = 0.04;
    double median_s = 10.0;
    double window_s = 5.0;  // Hilbert/FOG analysis window
    bool demean = true;     // remove the mean (gravity) before the SST

    static TfrConfig default_tfr();
};

struct WalkRidges {
    Tfr S;
    RidgeSet ridges;  // Q rows
};

// SST of the magnitude and its Q-row ridge set (joint K-harmonic search, then
// rows K+1..Q conditioned on the fundamental).
WalkRidges walk_ridges(const Signal& magnitude_signal, const WalkConfig& cfg);

IndexSeries compute_index(IndexKind kind, const TriaxialRecording& rec, const WalkConfig& cfg);

struct SubjectResult {
    std::string subject_id;
    bool skipped = false;
    double threshold = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct EvalReport {
    std::string index;
    std::vector<SubjectResult> subjects;
    double mean_accuracy = 0.0;
    double mean_f1 = 0.0;
};

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy() const;
    double f1() const;  // 0 when tp = 0
};

// Scores predictions against labels; samples labelled Other are ignored.
Confusion score_threshold(const IndexSeries& idx, const std::vector<Activity>& labels, double threshold);

// Threshold maximising F1 over the pooled training series, swept over 200 quantiles. Ties go to the lower quantile.
double fit_threshold(const std::vector<const IndexSeries*>& series, const std::vector<const std::vector<Activity>*>& labels);

// Leave-one-subject-out evaluation of precomputed index series (one per subject).
EvalReport losocv_threshold(const std::vector<IndexSeries>& series, const std::vector<TriaxialRecording>& recs);
EvalReport losocv_threshold(const std::vector<TriaxialRecording>& recs, IndexKind kind, const WalkConfig& cfg);

std::string report_to_json(const EvalReport& r);

TriaxialRecording read_recording_csv(const std::string& path, const std::string& subject_id = "");
void write_recording_csv(const std::string& path, const TriaxialRecording& rec);
// Every *.csv in dir, sorted by name; the subject id is the file stem.
std::vector<TriaxialRecording> read_corpus(const std::string& dir);
void write_index_csv(const std::string& path, const IndexSeries& idx, double fs);

struct SyntheticCorpusSpec {
    std::size_t subjects = 3;
    double fs = 100.0;
    double duration_s = 300.0;
    double walk_min_s = 30.0;
    double walk_max_s = 40.0;
    double rest_min_s = 20.0;
    double rest_max_s = 40.0;
    double step_hz = 2.0;
    double step_jitter_hz = 0.15;  // per-burst cadence spread
    double walk_amp_g = 0.3;
    double noise_g = 0.15;
    double other_s = 4.0;          // unlabelled transition after each burst
    std::uint64_t seed = 1;
};

std::vector<TriaxialRecording> synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace ridgekit
