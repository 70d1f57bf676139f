#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "relay/cost.hpp"
#include "relay/errors.hpp"
#include "relay/lloyd.hpp"

namespace relay {

inline std::vector<double> default_lambda_grid() {
    std::vector<double> grid{0.0};
    const int count = 40;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        grid.push_back(std::pow(10.0, -2.0 + 4.0 * t));
    }
    return grid;
}

struct SweepSpec {
    std::vector<double> lambda_grid = default_lambda_grid();
    int n = 1;
    Mode mode = Mode::centralized;
    LloydConfig lloyd;
    EvalConfig eval;
};

struct SweepPoint {
    double lambda = 0.0;
    double p_uav = 0.0;
    double p_gt = 0.0;
    double se_uav = 0.0;
    double se_gt = 0.0;
    Deployment deployment;
};

struct SweepResult {
    std::vector<SweepPoint> raw_points;
    std::vector<SweepPoint> hull_points;
};

// Vertices of the lower-left convex hull in (p_uav, p_gt) space: the
// operational tradeoff achievable by time sharing between deployments.
// Output is sorted by p_uav ascending with p_gt strictly decreasing.
inline std::vector<SweepPoint> lower_hull(std::vector<SweepPoint> pts) {
    if (pts.empty()) throw usage_error("lower_hull: need at least one point");
    std::sort(pts.begin(), pts.end(), [](const SweepPoint& a,
                                         const SweepPoint& b) {
        return a.p_uav < b.p_uav || (a.p_uav == b.p_uav && a.p_gt < b.p_gt);
    });
    // drop duplicates in p_uav, keeping the lowest p_gt
    std::vector<SweepPoint> uniq;
    for (auto& p : pts)
        if (uniq.empty() || p.p_uav > uniq.back().p_uav)
            uniq.push_back(std::move(p));
    // monotone-chain lower hull
    std::vector<SweepPoint> hull;
    for (auto& p : uniq) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            const double cross = (b.p_uav - a.p_uav) * (p.p_gt - a.p_gt) -
                                 (p.p_uav - a.p_uav) * (b.p_gt - a.p_gt);
            if (cross <= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(std::move(p));
    }
    // trim the ascending tail past the global p_gt minimum (dominated points)
    std::vector<SweepPoint> out;
    for (auto& p : hull) {
        if (!out.empty() && p.p_gt >= out.back().p_gt) break;
        out.push_back(std::move(p));
    }
    return out;
}

// Lambda-grid sweep: one Lloyd optimization and one evaluation per lambda,
// warm-starting each lambda from the previous result.
inline SweepResult sweep(const Scenario& scenario, const SweepSpec& spec) {
    if (spec.lambda_grid.empty())
        throw usage_error("sweep: lambda grid must be nonempty");
    for (std::size_t i = 0; i < spec.lambda_grid.size(); ++i) {
        if (!(spec.lambda_grid[i] >= 0.0))
            throw usage_error("sweep: lambdas must be >= 0");
        if (i > 0 && !(spec.lambda_grid[i] > spec.lambda_grid[i - 1]))
            throw usage_error("sweep: lambda grid must be ascending, distinct");
    }
    Scenario sc = scenario;
    sc.n = spec.n;

    SweepResult result;
    std::vector<Deployment> warm;
    for (const double lambda : spec.lambda_grid) {
        const LloydResult opt = optimize(sc, lambda, spec.mode, spec.lloyd,
                                         warm);
        SelectionRule rule{spec.mode, lambda, {}};
        if (spec.mode == Mode::distributed)
            rule.gr_side_costs =
                gr_side_costs(opt.deployment, sc.fY, sc.h, sc.r);
        const PowerEstimate est = evaluate(opt.deployment, rule, sc,
                                           spec.eval);
        result.raw_points.push_back({lambda, est.p_uav, est.p_gt, est.se_uav,
                                     est.se_gt, opt.deployment});
        warm = {opt.deployment};
    }
    result.hull_points = lower_hull(result.raw_points);
    return result;
}

}  // namespace relay
