// Acceptance suite: one pass/fail line per criterion, exit code = number
// of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "relay/analytic.hpp"
#include "relay/cost.hpp"
#include "relay/density.hpp"
#include "relay/lloyd.hpp"
#include "relay/sweep.hpp"

using namespace relay;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL",
                criterion, name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

Scenario two_interval(int n) {
    return Scenario(Density::uniform1(0.0, 1.0), Density::uniform1(2.0, 3.0),
                    0.0, 2.0, 1.0, n);
}

bool within_rel(double got, double want, double rel) {
    return std::abs(got - want) <= rel * std::abs(want);
}

std::vector<double> sorted_positions(const Deployment& U) {
    std::vector<double> pos;
    for (const auto& u : U.positions) pos.push_back(u[0]);
    std::sort(pos.begin(), pos.end());
    return pos;
}

bool trace_monotone(const std::vector<double>& trace) {
    for (std::size_t k = 0; k + 1 < trace.size(); ++k)
        if (trace[k + 1] > trace[k] + 1e-12) return false;
    return true;
}

// criterion 1: single-relay exactness for lambda in {0, 0.25, 1, 3, 10}
void criterion1() {
    const Scenario sc = two_interval(1);
    bool ok = true;
    std::string detail;
    for (const double lambda : {0.0, 0.25, 1.0, 3.0, 10.0}) {
        LloydConfig cfg;
        cfg.sample_count = 1000000;
        cfg.restarts = 1;
        cfg.seed = 2024;
        const LloydResult res = optimize(sc, lambda, Mode::centralized, cfg);
        const double u_want = (0.5 + 2.5 * lambda) / (1.0 + lambda);
        const double u_got = res.deployment.positions[0][0];

        const SelectionRule rule{Mode::centralized, lambda, {}};
        const PowerEstimate est =
            evaluate(res.deployment, rule, sc, EvalConfig::quadrature());
        const double s = (1.0 + lambda) * (1.0 + lambda);
        const double pu_want = 1.0 / 12.0 + 4.0 / s;
        const double pg_want = 1.0 / 12.0 + 4.0 * lambda * lambda / s;

        const bool here = std::abs(u_got - u_want) <= 1e-3 &&
                          within_rel(est.p_uav, pu_want, 0.005) &&
                          within_rel(est.p_gt, pg_want, 0.005);
        if (!here) {
            ok = false;
            detail += "lambda=" + std::to_string(lambda) + " off; ";
        }
    }
    if (ok) detail = "u1 within 1e-3 and powers within 0.5% at all lambdas";
    report(1, "single-relay tradeoff exactness", ok, detail);
}

// criterion 2: centralized n = 64, lambda = 1 near the asymptotic pair
void criterion2() {
    const Scenario sc = two_interval(64);
    LloydConfig cfg;
    cfg.sample_count = 120000;
    cfg.restarts = 2;
    cfg.max_iterations = 80;
    cfg.seed = 7;
    const LloydResult res = optimize(sc, 1.0, Mode::centralized, cfg);
    const SelectionRule rule{Mode::centralized, 1.0, {}};
    const PowerEstimate est =
        evaluate(res.deployment, rule, sc, EvalConfig::quadrature(256, 8));
    const double want = 50.0 / 48.0;
    const bool ok = within_rel(est.p_uav, want, 0.05) &&
                    within_rel(est.p_gt, want, 0.05);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "p_uav=%.6f p_gt=%.6f vs %.6f (tol 5%%)", est.p_uav,
                  est.p_gt, want);
    report(2, "centralized asymptotic convergence at n=64", ok, buf);
}

// criterion 3: GT power saturation 1/(12 n^2) at tiny lambda
void criterion3() {
    const double lambda = 1e-3;
    bool ok = true;
    std::string detail;
    for (const int n : {2, 4, 8}) {
        const Scenario sc = two_interval(n);
        LloydConfig cfg;
        cfg.sample_count = 200000;
        cfg.restarts = 4;
        cfg.seed = 11;
        const LloydResult res = optimize(sc, lambda, Mode::centralized, cfg);
        const SelectionRule rule{Mode::centralized, lambda, {}};
        const PowerEstimate est =
            evaluate(res.deployment, rule, sc, EvalConfig::quadrature(512, 8));
        const double want = 1.0 / (12.0 * n * n);
        if (!within_rel(est.p_gt, want, 0.05)) {
            ok = false;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "n=%d p_gt=%.3e vs %.3e; ", n,
                          est.p_gt, want);
            detail += buf;
        }
    }
    if (ok) detail = "p_gt within 5% of 1/(12 n^2) for n in {2,4,8}";
    report(3, "GT power saturation law", ok, detail);
}

// criterion 4: distributed UAV power floor at large lambda
void criterion4() {
    const double lambda = 1e3;
    const Scenario sc = two_interval(8);
    LloydConfig cfg;
    cfg.sample_count = 200000;
    cfg.restarts = 3;
    cfg.seed = 3;
    const LloydResult res = optimize(sc, lambda, Mode::distributed, cfg);
    SelectionRule rule{Mode::distributed, lambda, {}};
    rule.gr_side_costs = gr_side_costs(res.deployment, sc.fY, sc.h, sc.r);
    const PowerEstimate est =
        evaluate(res.deployment, rule, sc, EvalConfig::quadrature(256, 8));
    const double want =
        1.0 / 12.0 + 49.0 / (12.0 * (1.0 + lambda) * (1.0 + lambda));
    const bool ok = within_rel(est.p_uav, want, 0.02);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "p_uav=%.8f vs %.8f (tol 2%%)", est.p_uav,
                  want);
    report(4, "distributed UAV power floor", ok, buf);
}

// criterion 5: Lloyd positions vs inverse-transform of the point density
void criterion5() {
    const Scenario sc = two_interval(8);
    LloydConfig cfg;
    cfg.sample_count = 400000;
    cfg.restarts = 8;
    cfg.seed = 21;
    const LloydResult res = optimize(sc, 1.0, Mode::centralized, cfg);
    const std::vector<double> lloyd = sorted_positions(res.deployment);

    const GridDensity fz = combine_z(sc.fX, sc.fY, 1.0, 4096);
    const GridDensity ell = point_density(fz, sc.r);
    const std::vector<double> analytic =
        sorted_positions(inverse_transform_deployment(ell, 8));

    double max_dev = 0.0;
    for (int i = 0; i < 8; ++i)
        max_dev = std::max(max_dev, std::abs(lloyd[i] - analytic[i]));
    const bool ok = max_dev <= 0.05;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |Lloyd - inverse-transform| = %.4f",
                  max_dev);
    report(5, "deployment fidelity at n=8, lambda=1", ok, buf);
}

// criterion 6: Lloyd vs brute-force grid search at lambda = 0, n = 2
void criterion6() {
    const Scenario sc(Density::uniform1(0.0, 1.0),
                      Density::uniform1(0.0, 1.0), 0.0, 2.0, 1.0, 2);
    // oracle: composite-midpoint cost on a 200 x 200 deployment grid
    const auto cost_of = [](double u1, double u2) {
        const int cells = 2000;
        double s = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double x = (i + 0.5) / cells;
            s += std::min((x - u1) * (x - u1), (x - u2) * (x - u2));
        }
        return s / cells;
    };
    double grid_min = 1e300, best1 = 0, best2 = 0;
    for (int i = 0; i < 200; ++i)
        for (int j = i; j < 200; ++j) {
            const double u1 = (i + 0.5) / 200.0;
            const double u2 = (j + 0.5) / 200.0;
            const double c = cost_of(u1, u2);
            if (c < grid_min) {
                grid_min = c;
                best1 = u1;
                best2 = u2;
            }
        }
    LloydConfig cfg;
    cfg.sample_count = 200000;
    cfg.restarts = 4;
    cfg.seed = 17;
    const LloydResult res = optimize(sc, 0.0, Mode::centralized, cfg);
    const SelectionRule rule{Mode::centralized, 0.0, {}};
    const PowerEstimate est =
        evaluate(res.deployment, rule, sc, EvalConfig::quadrature(512, 8));
    const bool ok = std::abs(est.p_gt - grid_min) <= 1e-3 &&
                    std::abs(grid_min - 1.0 / 48.0) <= 1e-4 &&
                    std::abs(best1 - 0.25) <= 0.01 &&
                    std::abs(best2 - 0.75) <= 0.01;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "lloyd=%.6f grid=%.6f expected=%.6f at {%.3f, %.3f}",
                  est.p_gt, grid_min, 1.0 / 48.0, best1, best2);
    report(6, "brute-force oracle equivalence", ok, buf);
}

Density random_mixture(std::uint64_t seed) {
    const int k = 1 + static_cast<int>(rng::uniform01(seed, 0, 0) * 4.0);
    std::vector<MixtureComponent> comps;
    double sum = 0.0;
    std::vector<double> raw;
    for (int i = 0; i < k; ++i) {
        raw.push_back(0.05 + rng::uniform01(seed, 1, i));
        sum += raw.back();
    }
    for (int i = 0; i < k; ++i) {
        const double lo = -5.0 + 10.0 * rng::uniform01(seed, 2, i);
        const double width = 0.1 + 3.0 * rng::uniform01(seed, 3, i);
        comps.push_back({raw[i] / sum,
                         Box{Point{lo, 0.0}, Point{lo + width, 0.0}}});
    }
    return Density(1, std::move(comps));
}

// criterion 7: invariant suites with zero violations
void criterion7() {
    int violations = 0;
    std::string detail;

    // (a) monotone Lloyd traces under common random numbers
    for (const Mode mode : {Mode::centralized, Mode::distributed}) {
        const Scenario sc = two_interval(4);
        LloydConfig cfg;
        cfg.sample_count = 50000;
        cfg.restarts = 3;
        cfg.seed = 31;
        const LloydResult res = optimize(sc, 0.8, mode, cfg);
        if (!trace_monotone(res.cost_trace)) {
            ++violations;
            detail += "trace(" + to_string(mode) + "); ";
        }
    }

    // (b) moment identities on 100 random mixture pairs
    for (int t = 0; t < 100; ++t) {
        const MomentSet m =
            moments(random_mixture(100 + t), random_mixture(900 + t));
        if (std::abs(m.c0 - (m.cX + m.cY + m.c1)) > 1e-9 ||
            std::abs(m.c2 - (m.cX + m.c1)) > 1e-9) {
            ++violations;
            detail += "moments t=" + std::to_string(t) + "; ";
        }
    }

    // (c) centralized <= distributed Lagrangian on 50 random instances
    for (int t = 0; t < 50; ++t) {
        const Scenario sc = two_interval(1);
        const int n = 1 + static_cast<int>(rng::uniform01(55, 0, t) * 6.0);
        Deployment U;
        for (int i = 0; i < n; ++i)
            U.positions.push_back(
                {4.0 * rng::uniform01(55, 1 + i, t) - 0.5, 0.0});
        const double lambda = 5.0 * rng::uniform01(55, 99, t);
        const auto xs = sc.fX.sample(rng::derive(60, t), 20000);
        const auto ys = sc.fY.sample(rng::derive(61, t), 20000);
        const double cen =
            lagrangian_cost(U, sc, lambda, Mode::centralized, xs, ys);
        const double dis =
            lagrangian_cost(U, sc, lambda, Mode::distributed, xs, ys);
        if (cen > dis + 1e-12) {
            ++violations;
            detail += "dominance t=" + std::to_string(t) + "; ";
        }
    }

    // (d) hull convexity of sweep outputs
    for (const Mode mode : {Mode::centralized, Mode::distributed}) {
        const Scenario sc = two_interval(2);
        SweepSpec spec;
        spec.lambda_grid = {0.1, 0.3, 1.0, 3.0, 10.0};
        spec.n = 2;
        spec.mode = mode;
        spec.lloyd.sample_count = 50000;
        spec.lloyd.restarts = 3;
        spec.eval = EvalConfig::quadrature();
        const SweepResult res = sweep(sc, spec);
        for (std::size_t i = 2; i < res.hull_points.size(); ++i) {
            const auto& a = res.hull_points[i - 2];
            const auto& b = res.hull_points[i - 1];
            const auto& c = res.hull_points[i];
            const double s1 = (b.p_gt - a.p_gt) / (b.p_uav - a.p_uav);
            const double s2 = (c.p_gt - b.p_gt) / (c.p_uav - b.p_uav);
            if (s2 < s1 - 1e-12) {
                ++violations;
                detail += "hull(" + to_string(mode) + "); ";
            }
        }
    }

    const bool ok = violations == 0;
    if (ok)
        detail = "monotone traces, moment identities, selection dominance, "
                 "hull convexity: all clean";
    report(7, "invariant suites", ok, detail);
}

// criterion 8: distributed n = 64, lambda = 1 near the asymptotic pair
void criterion8() {
    const Scenario sc = two_interval(64);
    LloydConfig cfg;
    cfg.sample_count = 120000;
    cfg.restarts = 2;
    cfg.max_iterations = 80;
    cfg.seed = 19;
    const LloydResult res = optimize(sc, 1.0, Mode::distributed, cfg);
    SelectionRule rule{Mode::distributed, 1.0, {}};
    rule.gr_side_costs = gr_side_costs(res.deployment, sc.fY, sc.h, sc.r);
    const PowerEstimate est =
        evaluate(res.deployment, rule, sc, EvalConfig::quadrature(256, 8));
    const double pu_want = 1.0 / 12.0 + 49.0 / 48.0;
    const double pg_want = 49.0 / 48.0;
    const bool ok = within_rel(est.p_uav, pu_want, 0.05) &&
                    within_rel(est.p_gt, pg_want, 0.05);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "p_uav=%.6f vs %.6f, p_gt=%.6f vs %.6f (tol 5%%)",
                  est.p_uav, pu_want, est.p_gt, pg_want);
    report(8, "distributed asymptotic convergence at n=64", ok, buf);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures;
}
