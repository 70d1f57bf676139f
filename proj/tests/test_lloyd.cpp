#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "relay/lloyd.hpp"
#include "test_support.hpp"

using namespace relay;
using testsupport::gr_unit;
using testsupport::gt_unit;
using testsupport::two_interval_scenario;

TEST(CentroidUpdate, ClosedFormExamples) {
    // single pair, midpoint of the closed form
    EXPECT_NEAR(centroid_update({{{0, 0}, {3, 0}, 1.0}}, 1.0, 0.0, 2.0, 1)[0],
                1.5, 1e-12);
    // linearity over two pairs
    EXPECT_NEAR(centroid_update({{{0, 0}, {2, 0}, 1.0}, {{1, 0}, {3, 0}, 1.0}},
                                1.0, 0.0, 2.0, 1)[0],
                1.5, 1e-12);
    EXPECT_THROW(centroid_update({}, 1.0, 0.0, 2.0, 1), usage_error);
}

TEST(CentroidUpdate, ConvexSolverSymmetricQuartic) {
    // minimize (1 + u^2)^2 + (1 + (2-u)^2)^2 -> u = 1 by symmetry
    const Point u =
        centroid_update({{{0, 0}, {2, 0}, 1.0}}, 1.0, 1.0, 4.0, 1, 1e-12);
    EXPECT_NEAR(u[0], 1.0, 1e-7);
}

TEST(CentroidUpdate, WeightsMatter) {
    // weight 3 on the pair pulling left
    const Point u = centroid_update(
        {{{0, 0}, {0, 0}, 3.0}, {{4, 0}, {4, 0}, 1.0}}, 1.0, 0.0, 2.0, 1);
    EXPECT_NEAR(u[0], 1.0, 1e-12);
}

TEST(LagrangianCost, Examples) {
    const Scenario sc = two_interval_scenario();
    const std::size_t N = 200000;
    const auto xs = sc.fX.sample(21, N);
    const auto ys = sc.fY.sample(22, N);

    // n = 1 at E[Z] = 1.5, lambda = 1: (cX + 1) + (cY + 1) = 26/12
    const Deployment at_ez{{Point{1.5, 0}}};
    const double c = lagrangian_cost(at_ez, sc, 1.0, Mode::centralized, xs, ys);
    EXPECT_NEAR(c, 26.0 / 12.0, 0.02);

    // single relay at E[X] with lambda = 0 -> cX
    const Deployment at_ex{{Point{0.5, 0}}};
    const double c0 =
        lagrangian_cost(at_ex, sc, 0.0, Mode::centralized, xs, ys);
    EXPECT_NEAR(c0, 1.0 / 12.0, 0.002);
}

TEST(LagrangianCost, MatchesEvaluateOnSameSamples) {
    const Scenario sc = two_interval_scenario();
    const std::size_t N = 50000;
    const std::uint64_t seed = 77;
    const auto xs = sc.fX.sample(rng::derive(seed, 0xA11CE), N);
    const auto ys = sc.fY.sample(rng::derive(seed, 0xB0B), N);
    const Deployment U{{Point{0.8, 0}, Point{2.1, 0}}};
    const double lambda = 0.6;

    for (const Mode mode : {Mode::centralized, Mode::distributed}) {
        SelectionRule rule{mode, lambda, {}};
        if (mode == Mode::distributed)
            rule.gr_side_costs = gr_side_costs(U, sc.fY, sc.h, sc.r);
        const PowerEstimate est =
            evaluate(U, rule, sc, EvalConfig::monte_carlo(seed, N));
        const double cost = lagrangian_cost(U, sc, lambda, mode, xs, ys);
        EXPECT_NEAR(cost, est.p_gt + lambda * est.p_uav, 1e-9);
    }
}

TEST(Optimize, TwoCellQuantizer) {
    Scenario sc(gt_unit(), gt_unit(), 0.0, 2.0, 1.0, 2);
    LloydConfig cfg;
    cfg.sample_count = 100000;
    cfg.restarts = 4;
    const LloydResult res = optimize(sc, 0.0, Mode::centralized, cfg);
    std::vector<double> pos{res.deployment.positions[0][0],
                            res.deployment.positions[1][0]};
    std::sort(pos.begin(), pos.end());
    EXPECT_NEAR(pos[0], 0.25, 0.01);
    EXPECT_NEAR(pos[1], 0.75, 0.01);
    EXPECT_NEAR(res.cost_trace.back(), 1.0 / 48.0, 0.001);
    EXPECT_TRUE(res.converged);
}

TEST(Optimize, SingleRelayAtMeanZ) {
    Scenario sc = two_interval_scenario();
    LloydConfig cfg;
    cfg.sample_count = 400000;
    cfg.restarts = 2;
    const LloydResult res = optimize(sc, 1.0, Mode::centralized, cfg);
    EXPECT_NEAR(res.deployment.positions[0][0], 1.5, 2e-3);
}

TEST(Optimize, LargeLambdaUniformOnReceiverInterval) {
    Scenario sc = two_interval_scenario(8);
    LloydConfig cfg;
    cfg.sample_count = 200000;
    cfg.restarts = 6;
    cfg.seed = 5;
    const LloydResult res = optimize(sc, 1e4, Mode::centralized, cfg);
    std::vector<double> pos;
    for (const auto& u : res.deployment.positions) pos.push_back(u[0]);
    std::sort(pos.begin(), pos.end());
    for (int i = 0; i < 8; ++i)
        EXPECT_NEAR(pos[i], 2.0 + (2.0 * i + 1.0) / 16.0, 0.02) << "relay " << i;
}

TEST(Optimize, MonotoneCostTrace) {
    Scenario sc = two_interval_scenario(4);
    LloydConfig cfg;
    cfg.sample_count = 50000;
    cfg.restarts = 3;
    for (const Mode mode : {Mode::centralized, Mode::distributed}) {
        const LloydResult res = optimize(sc, 0.8, mode, cfg);
        for (std::size_t k = 0; k + 1 < res.cost_trace.size(); ++k)
            EXPECT_LE(res.cost_trace[k + 1], res.cost_trace[k] + 1e-12);
    }
}

TEST(Optimize, FixedPointFormulaForSingleRelay) {
    // converged u1 = (sample mean X + lambda sample mean Y) / (1 + lambda)
    Scenario sc = two_interval_scenario();
    LloydConfig cfg;
    cfg.sample_count = 20000;
    cfg.restarts = 1;
    cfg.seed = 13;
    const double lambda = 2.5;
    const auto xs = sc.fX.sample(rng::derive(cfg.seed, 1), cfg.sample_count);
    const auto ys = sc.fY.sample(rng::derive(cfg.seed, 2), cfg.sample_count);
    const LloydResult res = optimize(sc, lambda, Mode::centralized, cfg);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i][0];
        my += ys[i][0];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(ys.size());
    EXPECT_NEAR(res.deployment.positions[0][0],
                (mx + lambda * my) / (1.0 + lambda), 1e-9);
}

TEST(Optimize, PermutingInitialIndicesPermutesOutput) {
    Scenario sc = two_interval_scenario(3);
    LloydConfig cfg;
    cfg.sample_count = 30000;
    const auto xs = sc.fX.sample(101, cfg.sample_count);
    const auto ys = sc.fY.sample(102, cfg.sample_count);
    const Deployment init{{Point{1.2, 0}, Point{1.5, 0}, Point{1.8, 0}}};
    const Deployment permuted{{Point{1.8, 0}, Point{1.2, 0}, Point{1.5, 0}}};
    const LloydResult a =
        lloyd_run(sc, 1.0, Mode::centralized, cfg, init, xs, ys);
    const LloydResult b =
        lloyd_run(sc, 1.0, Mode::centralized, cfg, permuted, xs, ys);
    EXPECT_DOUBLE_EQ(a.deployment.positions[0][0],
                     b.deployment.positions[1][0]);
    EXPECT_DOUBLE_EQ(a.deployment.positions[1][0],
                     b.deployment.positions[2][0]);
    EXPECT_DOUBLE_EQ(a.deployment.positions[2][0],
                     b.deployment.positions[0][0]);
}

TEST(Optimize, DistributedEqualsCentralizedForSingleRelay) {
    Scenario sc = two_interval_scenario();
    LloydConfig cfg;
    cfg.sample_count = 400000;
    cfg.restarts = 2;
    const double lambda = 1.5;
    const LloydResult c = optimize(sc, lambda, Mode::centralized, cfg);
    const LloydResult d = optimize(sc, lambda, Mode::distributed, cfg);
    // identical up to the sample-mean noise of the GR draw
    EXPECT_NEAR(c.deployment.positions[0][0], d.deployment.positions[0][0],
                3e-3);
}

TEST(Optimize, GeneralExponentRuns) {
    Scenario sc(gt_unit(), gr_unit(), 0.5, 4.0, 1.0, 2);
    LloydConfig cfg;
    cfg.sample_count = 20000;
    cfg.restarts = 2;
    cfg.max_iterations = 40;
    const LloydResult res = optimize(sc, 1.0, Mode::centralized, cfg);
    EXPECT_EQ(res.deployment.size(), 2u);
    for (std::size_t k = 0; k + 1 < res.cost_trace.size(); ++k)
        EXPECT_LE(res.cost_trace[k + 1], res.cost_trace[k] + 1e-9);
    for (const auto& u : res.deployment.positions) {
        EXPECT_GT(u[0], 0.0);
        EXPECT_LT(u[0], 3.0);
    }
}

TEST(Optimize, UsageErrors) {
    Scenario sc = two_interval_scenario();
    LloydConfig cfg;
    cfg.sample_count = 50;
    sc.n = 10;
    EXPECT_THROW(optimize(sc, 1.0, Mode::centralized, cfg), usage_error);
    cfg.sample_count = 10000;
    EXPECT_THROW(optimize(sc, -1.0, Mode::centralized, cfg), usage_error);
}
