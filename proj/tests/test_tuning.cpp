#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/tuning.hpp"

using namespace ridgekit;

TEST(Renyi, ClosedForms) {
    const std::vector<double> uniform(4, 2.5);
    EXPECT_NEAR(renyi_entropy(uniform, 2.0), std::log(4.0), 1e-12);
    const std::vector<double> hot{0, 0, 7, 0};
    for (double a : {0.5, 2.0, 2.4, 5.0}) EXPECT_NEAR(renyi_entropy(hot, a), 0.0, 1e-14);
    EXPECT_NEAR(renyi_entropy(std::vector<double>{3, 1}, 2.0), -std::log(10.0 / 16.0), 1e-12);
    EXPECT_NEAR(renyi_entropy(std::vector<double>{3, 1}, 2.0), 0.4700036, 1e-6);
}

TEST(Renyi, ScaleInvariantAndBounded) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + trial % 17), w;
        for (auto& x : v) x = u(rng) < 0.2 ? 0.0 : u(rng);
        v[0] += 0.1;
        const double c = std::ldexp(1.0, trial % 9 - 4);  // powers of two keep the ratios bitwise equal
        for (double x : v) w.push_back(c * x);
        for (double a : {0.5, 2.0, 2.4}) {
            const double h = renyi_entropy(v, a);
            EXPECT_EQ(h, renyi_entropy(w, a));
            EXPECT_GE(h, -1e-12);
            EXPECT_LE(h, std::log(static_cast<double>(v.size())) + 1e-12);
        }
    }
}

TEST(Renyi, Errors) {
    EXPECT_THROW(renyi_entropy(std::vector<double>{0, 0}, 2.0), DegenerateInput);
    EXPECT_THROW(renyi_entropy(std::vector<double>{1, 2}, 1.0), InvalidParameter);
    EXPECT_THROW(renyi_entropy(std::vector<double>{1, 2}, 0.0), InvalidParameter);
    EXPECT_THROW(renyi_entropy(std::vector<double>{1, -2}, 2.0), InvalidParameter);
}

TEST(LambdaSchedule, Examples) {
    EXPECT_EQ(lambda_schedule(2.0, 0.0, 4), std::vector<double>(4, 2.0));
    const auto l = lambda_schedule(1.0, 0.1, 3);
    EXPECT_DOUBLE_EQ(l[0], 1.0);
    EXPECT_DOUBLE_EQ(l[1], 0.9);
    EXPECT_DOUBLE_EQ(l[2], 0.8);
    EXPECT_THROW(lambda_schedule(1.0, 0.1, 11), InvalidParameter);
}

TEST(ParamGrid, Defaults) {
    const ParamGrid g = ParamGrid::defaults();
    ASSERT_EQ(g.lambda1_candidates.size(), 7u);
    EXPECT_DOUBLE_EQ(g.lambda1_candidates.front(), 0.1);
    EXPECT_DOUBLE_EQ(g.lambda1_candidates.back(), 10.0);
    EXPECT_NEAR(g.lambda1_candidates[3], 1.0, 1e-12);
    ASSERT_EQ(g.beta_candidates.size(), 6u);
    EXPECT_DOUBLE_EQ(g.beta_candidates.front(), 1.0 / 64);
    EXPECT_LT(g.beta_candidates.back(), 0.5);
    EXPECT_NO_THROW(g.validate());
    ParamGrid bad = g;
    bad.beta_candidates.push_back(0.5);
    EXPECT_THROW(bad.validate(), InvalidParameter);
}

TEST(SelectParams, SingletonGrid) {
    const Tfr S = fixture::harmonic_speckle_sst(3);
    ParamGrid g;
    g.lambda1_candidates = {0.7};
    g.beta_candidates = {0.1};
    const TuningResult r = select_params(S, g, default_plan(S.rows(), S.dt, S.dxi));
    EXPECT_EQ(r.lambda1, 0.7);
    EXPECT_EQ(r.beta, 0.1);
    ASSERT_EQ(r.grid.size(), 1u);
    EXPECT_TRUE(r.grid[0].feasible);
}

TEST(SelectParams, ExactArgmaxOfRecomputedScores) {
    const Tfr S = fixture::harmonic_speckle_sst(5);
    ParamGrid g;
    g.lambda1_candidates = {1e-3, 1.0, 4.0};
    g.beta_candidates = {1.0 / 16, 1.0 / 8, 0.2};
    const SegmentPlan plan = default_plan(S.rows(), S.dt, S.dxi);
    const TuningResult r = select_params(S, g, plan);
    const auto pts = oracle::recompute_grid(S, g, plan);
    ASSERT_EQ(pts.size(), 9u);
    const auto best = oracle::argmax_grid(pts);
    EXPECT_EQ(r.lambda1, best.lambda1);
    EXPECT_EQ(r.beta, best.beta);
    EXPECT_EQ(r.score, best.score);
    for (const auto& p : pts) EXPECT_GE(r.score, p.score);
}

TEST(SelectParams, TiesGoToSmallerLambdaThenBeta) {
    // a constant TFR gives every grid point the same score
    Tfr S;
    S.values = Grid<cplx>(30, 20, cplx(1, 0));
    S.dt = 0.1;
    S.dxi = 0.5;
    ParamGrid g;
    g.lambda1_candidates = {2.0, 0.5, 1.0};
    g.beta_candidates = {0.3, 0.2};
    g.mask_delta_hz = 0.5;
    const TuningResult r = select_params(S, g, single_segment_plan(30));
    EXPECT_EQ(r.lambda1, 0.5);
    EXPECT_EQ(r.beta, 0.2);
}

TEST(SelectParams, AllInfeasibleThrows) {
    Tfr S;
    S.values = Grid<cplx>(5, 2, cplx(1, 0));
    ParamGrid g;
    g.K = 3;
    g.lambda1_candidates = {1.0};
    g.beta_candidates = {0.01};
    EXPECT_THROW(select_params(S, g, single_segment_plan(5)), Infeasible);
}

TEST(SelectParams, GridCsv) {
    const Tfr S = fixture::harmonic_speckle_sst(6);
    ParamGrid g;
    g.lambda1_candidates = {0.5, 2.0};
    g.beta_candidates = {0.1};
    const TuningResult r = select_params(S, g, default_plan(S.rows(), S.dt, S.dxi));
    const std::string path = ::testing::TempDir() + "grid.csv";
    write_grid_csv(path, r);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "lambda1,beta,score,feasible,selected");
    int rows = 0, selected = 0;
    while (std::getline(in, line)) {
        ++rows;
        selected += line.back() == '1';
    }
    EXPECT_EQ(rows, 2);
    EXPECT_EQ(selected, 1);
}
