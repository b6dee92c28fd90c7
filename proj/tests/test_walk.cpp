#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "ridgekit/errors.hpp"
#include "ridgekit/walk.hpp"

using namespace ridgekit;

namespace {

Tfr flat_tfr(std::size_t N, std::size_t M, double dxi) {
    Tfr S;
    S.values = Grid<cplx>(N, M, cplx(1, 0));
    S.dxi = dxi;
    S.dt = 0.01;
    return S;
}

RidgeSet constant_ridges(std::size_t N, std::vector<int> bins, double dxi) {
    RidgeSet c;
    for (int b : bins) {
        Ridge r;
        r.bins.assign(N, b);
        r.dxi = dxi;
        c.rows.push_back(r);
    }
    return c;
}

}  // namespace

TEST(RunningMedian, MatchesSortedWindow) {
    const std::vector<double> x{5, 1, 4, 2, 3, 9, 0, 7};
    const auto m = running_median(x, 3);
    ASSERT_EQ(m.size(), x.size());
    EXPECT_DOUBLE_EQ(m[0], 3.0);  // {5,1}
    EXPECT_DOUBLE_EQ(m[1], 4.0);
    EXPECT_DOUBLE_EQ(m[2], 2.0);
    EXPECT_DOUBLE_EQ(m[3], 3.0);
    EXPECT_DOUBLE_EQ(m[5], 3.0);
    EXPECT_DOUBLE_EQ(m[7], 3.5);
    EXPECT_EQ(running_median(x, 1), x);
}

TEST(SstWsi, FlatRowFraction) {
    const Tfr S = flat_tfr(5, 40, 0.1);
    // two bands of 2*2+1 bins out of 40
    const IndexSeries w = sst_wsi(S, constant_ridges(5, {10, 20}, 0.1), 0.2, 2);
    for (double v : w.values) EXPECT_NEAR(v, 10.0 / 40.0, 1e-12);
    EXPECT_TRUE(w.larger_is_walking);
    // clipped at the axis edge
    const IndexSeries e = sst_wsi(S, constant_ridges(5, {1}, 0.1), 0.2, 1);
    EXPECT_NEAR(e.values[0], 3.0 / 40.0, 1e-12);
    EXPECT_THROW(sst_wsi(S, constant_ridges(5, {10}, 0.1), 0.2, 2), InvalidParameter);
}

TEST(SstWsi, BoundedByOne) {
    Tfr S = flat_tfr(3, 30, 0.1);
    for (std::size_t q = 0; q < 30; ++q) S.values(1, q) = std::polar(1.0 + q, 0.3 * q);
    // disjoint bands
    const IndexSeries w = sst_wsi(S, constant_ridges(3, {5, 10, 15, 20}, 0.1), 0.2, 4);
    for (double v : w.values) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + 1e-12);
    }
}

TEST(EntropyRatio, ConcentratedSpectrumScoresLow) {
    // entropy of a peaked row is small relative to the row with the peak masked out
    Tfr S = flat_tfr(20, 50, 0.1);
    for (std::size_t l = 0; l < 20; ++l)
        for (std::size_t q = 0; q < 50; ++q) S.values(l, q) = q == 19 ? 100.0 : 0.01;
    const IndexSeries er = entropy_ratio_index(S, constant_ridges(20, {20}, 0.1), 2.4, 0.1, 0.0);
    for (double v : er.values) EXPECT_LT(v, 0.5);
    EXPECT_FALSE(er.larger_is_walking);
    const IndexSeries flat = entropy_ratio_index(flat_tfr(20, 50, 0.1), constant_ridges(20, {20}, 0.1), 2.4, 0.1, 0.0);
    for (double v : flat.values) EXPECT_NEAR(v, std::log(50.0) / std::log(47.0), 1e-12);
}

TEST(BandEnvelope, ToneEnergy) {
    const double fs = 100;
    std::vector<double> x(2000);
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.5 * std::cos(2 * std::numbers::pi * 2.0 * n / fs);
    const auto in = band_envelope_energy(Signal(x, fs), 1.0, 3.0);
    const auto out = band_envelope_energy(Signal(x, fs), 4.0, 8.0);
    for (std::size_t n = 100; n < 1900; n += 50) {
        EXPECT_NEAR(in[n], 0.25, 1e-9);
        EXPECT_NEAR(out[n], 0.0, 1e-9);
    }
    EXPECT_THROW(band_envelope_energy(Signal(x, fs), 3.0, 1.0), InvalidParameter);
}

TEST(WindowIndices, WalkingToneVersusNoise) {
    const double fs = 100;
    std::vector<double> walk(3000), rest(3000);
    for (std::size_t n = 0; n < walk.size(); ++n) {
        const double p = 2 * std::numbers::pi * 1.8 * n / fs;
        walk[n] = std::cos(p) + 0.3 * std::cos(0.5 * p);
        rest[n] = 0.05 * std::cos(2 * std::numbers::pi * 6.0 * n / fs);
    }
    const auto hw = hilbert_wsi(Signal(walk, fs), 5), hr = hilbert_wsi(Signal(rest, fs), 5);
    EXPECT_GT(hw.values[1500], 0.9);
    EXPECT_LT(hr.values[1500], 0.1);
    const auto fw = fog_wsi(Signal(walk, fs), 5), fr = fog_wsi(Signal(rest, fs), 5);
    EXPECT_GT(fw.values[1500], 100.0);
    EXPECT_LT(fr.values[1500], 1e-3);
    EXPECT_LE(fw.values[1500], 1e6);
    EXPECT_THROW(hilbert_wsi(Signal(walk, 10), 5), InvalidParameter);
}

TEST(Confusion, CountsIgnoreOther) {
    IndexSeries idx;
    idx.values = {0.9, 0.8, 0.1, 0.2, 0.95};
    const std::vector<Activity> lab{Activity::Walking, Activity::NonWalking, Activity::NonWalking, Activity::Walking,
                                    Activity::Other};
    const Confusion c = score_threshold(idx, lab, 0.5);
    EXPECT_EQ(c.tp, 1u);
    EXPECT_EQ(c.fp, 1u);
    EXPECT_EQ(c.tn, 1u);
    EXPECT_EQ(c.fn, 1u);
    EXPECT_DOUBLE_EQ(c.accuracy(), 0.5);
    EXPECT_DOUBLE_EQ(c.f1(), 0.5);
    idx.larger_is_walking = false;
    EXPECT_EQ(score_threshold(idx, lab, 0.5).tp, 1u);
    EXPECT_EQ(Confusion{}.f1(), 0.0);
}

TEST(Losocv, SeparableSeriesArePerfect) {
    std::vector<TriaxialRecording> recs(3);
    std::vector<IndexSeries> series(3);
    for (std::size_t s = 0; s < 3; ++s) {
        recs[s].subject_id = "s" + std::to_string(s);
        for (std::size_t n = 0; n < 100; ++n) {
            const bool walking = (n / 25) % 2 == 0;
            recs[s].x.push_back(0);
            recs[s].y.push_back(0);
            recs[s].z.push_back(1);
            recs[s].labels.push_back(walking ? Activity::Walking : Activity::NonWalking);
            series[s].values.push_back(walking ? 1.0 : 0.1 * s);
        }
        series[s].name = "test";
    }
    const EvalReport r = losocv_threshold(series, recs);
    ASSERT_EQ(r.subjects.size(), 3u);
    EXPECT_DOUBLE_EQ(r.mean_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.mean_f1, 1.0);
    EXPECT_NE(report_to_json(r).find("\"mean_f1\""), std::string::npos);
}

TEST(Losocv, SingleClassTrainingIsSkipped) {
    std::vector<TriaxialRecording> recs(2);
    std::vector<IndexSeries> series(2);
    for (std::size_t s = 0; s < 2; ++s) {
        recs[s].subject_id = "s" + std::to_string(s);
        recs[s].x = recs[s].y = recs[s].z = std::vector<double>(10, 0.0);
        recs[s].labels.assign(10, s == 0 ? Activity::Walking : Activity::NonWalking);
        series[s].values.assign(10, 1.0);
    }
    const EvalReport r = losocv_threshold(series, recs);
    EXPECT_TRUE(r.subjects[0].skipped);
    EXPECT_TRUE(r.subjects[1].skipped);
    EXPECT_THROW(losocv_threshold(std::vector<IndexSeries>(1), std::vector<TriaxialRecording>(1)), InvalidParameter);
}

TEST(Recording, CsvRoundTrip) {
    SyntheticCorpusSpec spec;
    spec.subjects = 1;
    spec.duration_s = 20;
    const auto recs = synthetic_corpus(spec);
    ASSERT_EQ(recs.size(), 1u);
    const std::string path = ::testing::TempDir() + "rec.csv";
    write_recording_csv(path, recs[0]);
    const TriaxialRecording back = read_recording_csv(path);
    EXPECT_EQ(back.subject_id, "rec");
    EXPECT_NEAR(back.fs, 100.0, 1e-6);
    ASSERT_EQ(back.size(), recs[0].size());
    EXPECT_EQ(back.labels, recs[0].labels);
    for (std::size_t n = 0; n < back.size(); n += 17) EXPECT_NEAR(back.z[n], recs[0].z[n], 1e-8);
    EXPECT_THROW(read_recording_csv(::testing::TempDir() + "missing.csv"), IoError);
}

TEST(Recording, Labels) {
    EXPECT_EQ(activity_from_string("1"), Activity::Walking);
    EXPECT_EQ(activity_from_string("non-walking"), Activity::NonWalking);
    EXPECT_EQ(activity_from_string(""), Activity::Other);
    EXPECT_THROW(activity_from_string("run"), InvalidParameter);
    EXPECT_EQ(index_from_string(to_string(IndexKind::EntropyRatio)), IndexKind::EntropyRatio);
    EXPECT_THROW(index_from_string("wsi"), InvalidParameter);
}

TEST(Corpus, DeterministicAndLabelled) {
    SyntheticCorpusSpec spec;
    spec.subjects = 2;
    spec.duration_s = 120;
    const auto a = synthetic_corpus(spec), b = synthetic_corpus(spec);
    EXPECT_EQ(a[1].x, b[1].x);
    std::size_t walk = 0, rest = 0;
    for (Activity l : a[0].labels) {
        walk += l == Activity::Walking;
        rest += l == Activity::NonWalking;
    }
    EXPECT_GT(walk, 0u);
    EXPECT_GT(rest, 0u);
}

TEST(WalkRidges, FundamentalFollowsCadence) {
    SyntheticCorpusSpec spec;
    spec.subjects = 1;
    spec.duration_s = 60;
    spec.walk_min_s = spec.walk_max_s = 100;  // one burst covering the whole record
    spec.noise_g = 0.05;
    auto rec = synthetic_corpus(spec)[0];
    WalkConfig cfg;
    cfg.Q = 4;
    const WalkRidges w = walk_ridges(magnitude(rec), cfg);
    ASSERT_EQ(w.ridges.harmonics(), 4u);
    const std::size_t mid = w.S.rows() / 2;
    bool walking_mid = rec.labels[mid] == Activity::Walking;
    if (walking_mid) EXPECT_NEAR(w.ridges.rows[0].hz(mid), 2.0, 0.25);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(w.ridges.rows[k].size(), w.S.rows());
}
