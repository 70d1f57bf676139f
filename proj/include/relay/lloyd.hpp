#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "relay/cost.hpp"
#include "relay/density.hpp"
#include "relay/errors.hpp"
#include "relay/geometry.hpp"
#include "relay/quadrature.hpp"
#include "relay/rng.hpp"

namespace relay {

struct LloydConfig {
    int max_iterations = 200;
    double relative_cost_tolerance = 1e-7;
    std::size_t sample_count = 200000;
    std::uint64_t seed = 1;
    int restarts = 10;
    double centroid_solver_tolerance = 1e-10;
};

struct LloydResult {
    Deployment deployment;
    std::vector<double> cost_trace;  // Lagrangian cost per iteration
    bool converged = false;
    int restart_index = 0;
};

namespace detail {

struct WeightedPoint {
    Point p{};
    double w = 0.0;
};

// Minimizes the convex cell objective
//   sum_a wa (h^2+||xa-u||^2)^(r/2) + lambda sum_b wb (h^2+||yb-u||^2)^(r/2)
// by gradient descent with backtracking; r = 2 has a closed form.
inline Point minimize_cell(const std::vector<WeightedPoint>& gt,
                           const std::vector<WeightedPoint>& gr,
                           double lambda, double h, double r, int dim,
                           double tol, const Point* start = nullptr) {
    double wsum = 0.0;
    Point u{0.0, 0.0};
    for (const auto& a : gt) {
        wsum += a.w;
        for (int j = 0; j < dim; ++j) u[j] += a.w * a.p[j];
    }
    for (const auto& b : gr) {
        wsum += lambda * b.w;
        for (int j = 0; j < dim; ++j) u[j] += lambda * b.w * b.p[j];
    }
    for (int j = 0; j < dim; ++j) u[j] /= wsum;
    if (r == 2.0) return u;
    // descend from the caller's current point so a truncated solve can
    // never increase the cell objective
    if (start) u = *start;

    // objective normalized by the total weight so gradients are O(1)
    const double inv_w = 1.0 / wsum;
    const auto value = [&](const Point& v) {
        double s = 0.0;
        for (const auto& a : gt) s += a.w * link_cost(a.p, v, dim, h, r);
        for (const auto& b : gr)
            s += lambda * b.w * link_cost(b.p, v, dim, h, r);
        return s * inv_w;
    };
    const auto gradient = [&](const Point& v) {
        Point g{0.0, 0.0};
        const auto add = [&](const Point& p, double w) {
            const double q = h * h + sq_dist(p, v, dim);
            const double f = w * r * std::pow(q, 0.5 * r - 1.0);
            for (int j = 0; j < dim; ++j) g[j] += f * (v[j] - p[j]);
        };
        for (const auto& a : gt) add(a.p, a.w);
        for (const auto& b : gr) add(b.p, lambda * b.w);
        for (int j = 0; j < dim; ++j) g[j] *= inv_w;
        return g;
    };

    double fu = value(u);
    double step = 1.0;
    for (int it = 0; it < 500; ++it) {
        const Point g = gradient(u);
        const double gnorm2 = sq_norm(g, dim);
        if (std::sqrt(gnorm2) <= tol) break;
        double t = std::min(step * 2.0, 1e6);
        bool moved = false;
        while (t > 1e-18) {
            Point cand = u;
            for (int j = 0; j < dim; ++j) cand[j] -= t * g[j];
            const double fc = value(cand);
            if (fc <= fu - 1e-4 * t * gnorm2) {
                u = cand;
                fu = fc;
                step = t;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    return u;
}

}  // namespace detail

struct WeightedPair {
    Point x{};
    Point y{};
    double w = 1.0;
};

// Minimizer of the per-cell Lagrangian objective over weighted (x, y) pairs.
// For r = 2 this is the weighted mean of (x + lambda*y)/(1 + lambda).
inline Point centroid_update(const std::vector<WeightedPair>& cell,
                             double lambda, double h, double r, int dim,
                             double tol = 1e-10) {
    if (cell.empty()) throw usage_error("centroid_update: empty cell");
    std::vector<detail::WeightedPoint> gt, gr;
    gt.reserve(cell.size());
    gr.reserve(cell.size());
    for (const auto& s : cell) {
        gt.push_back({s.x, s.w});
        gr.push_back({s.y, s.w});
    }
    return detail::minimize_cell(gt, gr, lambda, h, r, dim, tol);
}

// Monte-Carlo Lagrangian cost of a deployment on a supplied fixed sample
// set; identical to evaluate()'s p_gt + lambda*p_uav on the same samples.
inline double lagrangian_cost(const Deployment& U, const Scenario& sc,
                              double lambda, Mode mode,
                              const std::vector<Point>& xs,
                              const std::vector<Point>& ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw usage_error("lagrangian_cost: sample lists must match");
    SelectionRule rule{mode, lambda, {}};
    if (mode == Mode::distributed)
        rule.gr_side_costs = gr_side_costs(U, sc.fY, sc.h, sc.r);
    double s = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const std::size_t i = select(rule, U, xs[k], ys[k], sc);
        s += link_cost(xs[k], U.positions[i], sc.dim(), sc.h, sc.r) +
             lambda * link_cost(U.positions[i], ys[k], sc.dim(), sc.h, sc.r);
    }
    return sc.power_scale() * s / static_cast<double>(xs.size());
}

// One Lloyd run from a given initial deployment on a fixed sample set.
// Both steps exactly minimize the same discrete objective, so the cost
// trace is nonincreasing.
inline LloydResult lloyd_run(const Scenario& sc, double lambda, Mode mode,
                             const LloydConfig& cfg, Deployment initial,
                             const std::vector<Point>& xs,
                             const std::vector<Point>& ys) {
    const std::size_t n = initial.size();
    const std::size_t N = xs.size();
    if (n == 0) throw usage_error("lloyd_run: empty initial deployment");
    if (N == 0 || ys.size() != N)
        throw usage_error("lloyd_run: sample lists must be nonempty and equal");
    const int dim = sc.dim();
    const double scale = sc.power_scale();
    const Point meanY = sc.fY.mean();

    // GR-side quadrature nodes for the distributed centroid step, r != 2.
    std::vector<detail::WeightedPoint> gr_nodes;
    if (mode == Mode::distributed && sc.r != 2.0) {
        if (dim == 1) {
            for (const auto& q : density_nodes(sc.fY, 64, 8))
                gr_nodes.push_back({Point{q.x, 0.0}, q.w});
        } else {
            const auto yq = sc.fY.sample(rng::derive(cfg.seed, 0x9a0de), 4096);
            for (const auto& y : yq)
                gr_nodes.push_back({y, 1.0 / static_cast<double>(yq.size())});
        }
    }

    Deployment U = std::move(initial);
    LloydResult res;
    std::vector<std::size_t> assign(N, 0);
    std::vector<double> contrib(N, 0.0);
    std::vector<std::size_t> counts(n, 0);
    int reseeds_left = 5 + 2 * static_cast<int>(n);

    const auto proxy_point = [&](std::size_t k) {
        Point z{0.0, 0.0};
        for (int j = 0; j < dim; ++j) {
            const double yj = mode == Mode::centralized ? ys[k][j] : meanY[j];
            z[j] = (xs[k][j] + lambda * yj) / (1.0 + lambda);
        }
        return z;
    };

    // Exact minimizer of one cell's objective over the given sample indices,
    // started from the donor position when r != 2.
    const auto cell_centroid = [&](const std::vector<std::size_t>& ks,
                                   const Point& from) {
        if (sc.r == 2.0) {
            Point s{0.0, 0.0};
            for (const std::size_t k : ks) {
                const Point z = proxy_point(k);
                for (int j = 0; j < dim; ++j) s[j] += z[j];
            }
            for (int j = 0; j < dim; ++j) s[j] /= static_cast<double>(ks.size());
            return s;
        }
        std::vector<detail::WeightedPoint> gt, gr;
        for (const std::size_t k : ks) {
            gt.push_back({xs[k], 1.0});
            if (mode == Mode::centralized) gr.push_back({ys[k], 1.0});
        }
        if (mode == Mode::distributed) {
            gr = gr_nodes;
            for (auto& g : gr) g.w *= static_cast<double>(ks.size());
        }
        return detail::minimize_cell(gt, gr, lambda, sc.h, sc.r, dim,
                                     cfg.centroid_solver_tolerance, &from);
    };

    const auto assign_all = [&]() {
        std::vector<double> ghat;
        if (mode == Mode::distributed)
            ghat = gr_side_costs(U, sc.fY, sc.h, sc.r);
        std::fill(counts.begin(), counts.end(), 0);
        double total = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            std::size_t best = 0;
            double best_cost = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double gr =
                    mode == Mode::centralized
                        ? link_cost(U.positions[i], ys[k], dim, sc.h, sc.r)
                        : ghat[i];
                const double c =
                    link_cost(xs[k], U.positions[i], dim, sc.h, sc.r) +
                    lambda * gr;
                if (i == 0 || c < best_cost) {
                    best = i;
                    best_cost = c;
                }
            }
            assign[k] = best;
            contrib[k] = best_cost;
            ++counts[best];
            total += best_cost;
        }
        return scale * total / static_cast<double>(N);
    };

    double cost = assign_all();
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Repopulate an empty cell by splitting the busiest cell in half
        // along its widest proxy axis and placing both relays at their
        // halves' exact centroids; the aggregate cost cannot increase.
        while (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
            const auto empty_it = std::find(counts.begin(), counts.end(), 0);
            const std::size_t cell =
                static_cast<std::size_t>(empty_it - counts.begin());
            if (reseeds_left-- <= 0)
                throw numerical_error(
                    "Lloyd cell " + std::to_string(cell) +
                    " remained empty after exhausting the reseed budget");
            const std::size_t donor = static_cast<std::size_t>(
                std::max_element(counts.begin(), counts.end()) -
                counts.begin());
            std::vector<std::size_t> members;
            for (std::size_t k = 0; k < N; ++k)
                if (assign[k] == donor) members.push_back(k);
            int axis = 0;
            if (dim == 2) {
                double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
                for (const std::size_t k : members) {
                    const Point z = proxy_point(k);
                    for (int j = 0; j < 2; ++j) {
                        lo[j] = std::min(lo[j], z[j]);
                        hi[j] = std::max(hi[j], z[j]);
                    }
                }
                if (hi[1] - lo[1] > hi[0] - lo[0]) axis = 1;
            }
            std::nth_element(members.begin(),
                             members.begin() +
                                 static_cast<std::ptrdiff_t>(members.size() / 2),
                             members.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return proxy_point(a)[axis] <
                                        proxy_point(b)[axis];
                             });
            const std::vector<std::size_t> low(
                members.begin(),
                members.begin() + static_cast<std::ptrdiff_t>(members.size() / 2));
            const std::vector<std::size_t> high(
                members.begin() + static_cast<std::ptrdiff_t>(members.size() / 2),
                members.end());
            if (low.empty() || high.empty())
                throw numerical_error(
                    "Lloyd cell " + std::to_string(cell) +
                    " cannot be repopulated: donor cell is degenerate");
            const Point from = U.positions[donor];
            U.positions[donor] = cell_centroid(low, from);
            U.positions[cell] = cell_centroid(high, from);
            cost = assign_all();
        }
        res.cost_trace.push_back(cost);

        const std::size_t t = res.cost_trace.size();
        if (t >= 2) {
            const double prev = res.cost_trace[t - 2];
            if (prev - cost <=
                cfg.relative_cost_tolerance * std::max(std::abs(prev), 1e-300)) {
                res.converged = true;
                break;
            }
        }

        // Centroid step.
        if (sc.r == 2.0) {
            std::vector<Point> sums(n, Point{0.0, 0.0});
            for (std::size_t k = 0; k < N; ++k) {
                const std::size_t i = assign[k];
                for (int j = 0; j < dim; ++j) {
                    const double yj =
                        mode == Mode::centralized ? ys[k][j] : meanY[j];
                    sums[i][j] += (xs[k][j] + lambda * yj) / (1.0 + lambda);
                }
            }
            for (std::size_t i = 0; i < n; ++i)
                if (counts[i] > 0)
                    for (int j = 0; j < dim; ++j)
                        U.positions[i][j] =
                            sums[i][j] / static_cast<double>(counts[i]);
        } else {
            std::vector<std::vector<detail::WeightedPoint>> cells_gt(n);
            std::vector<std::vector<detail::WeightedPoint>> cells_gr(n);
            for (std::size_t k = 0; k < N; ++k) {
                cells_gt[assign[k]].push_back({xs[k], 1.0});
                if (mode == Mode::centralized)
                    cells_gr[assign[k]].push_back({ys[k], 1.0});
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[i] == 0) continue;
                if (mode == Mode::distributed) {
                    cells_gr[i] = gr_nodes;
                    for (auto& g : cells_gr[i])
                        g.w *= static_cast<double>(counts[i]);
                }
                U.positions[i] = detail::minimize_cell(
                    cells_gt[i], cells_gr[i], lambda, sc.h, sc.r, dim,
                    cfg.centroid_solver_tolerance, &U.positions[i]);
            }
        }
        cost = assign_all();
    }
    if (res.cost_trace.empty() || res.cost_trace.back() != cost)
        if (!res.converged) res.cost_trace.push_back(cost);
    res.deployment = std::move(U);
    return res;
}

// Generalized Lloyd optimization of the deployment for a fixed lambda.
// Each restart draws its own sample set and initializes relays at proxy
// points (x + lambda*y)/(1 + lambda) of randomly chosen samples; the best
// restart (lowest final cost, ties to the lowest index) is returned.
inline LloydResult optimize(const Scenario& sc, double lambda, Mode mode,
                            const LloydConfig& cfg,
                            const std::vector<Deployment>& extra_inits = {}) {
    if (!(lambda >= 0.0)) throw usage_error("optimize: lambda must be >= 0");
    const auto n = static_cast<std::size_t>(sc.n);
    if (n > cfg.sample_count / 10)
        throw usage_error("optimize: need sample_count >= 10*n");
    if (cfg.restarts < 1) throw usage_error("optimize: restarts must be >= 1");

    LloydResult best;
    bool have_best = false;
    const int total_runs = cfg.restarts + static_cast<int>(extra_inits.size());
    for (int t = 0; t < total_runs; ++t) {
        const auto xs = sc.fX.sample(rng::derive(cfg.seed, 2 * t + 1),
                                     cfg.sample_count);
        const auto ys = sc.fY.sample(rng::derive(cfg.seed, 2 * t + 2),
                                     cfg.sample_count);
        Deployment init;
        if (t < cfg.restarts) {
            std::vector<std::size_t> picked;
            for (std::size_t j = 0; picked.size() < n; ++j) {
                const std::size_t idx =
                    rng::counter_bits(cfg.seed, 777 + t, j) % cfg.sample_count;
                if (std::find(picked.begin(), picked.end(), idx) ==
                    picked.end())
                    picked.push_back(idx);
            }
            const Point meanY = sc.fY.mean();
            for (const std::size_t k : picked) {
                Point z{0.0, 0.0};
                for (int j = 0; j < sc.dim(); ++j) {
                    const double yj =
                        mode == Mode::centralized ? ys[k][j] : meanY[j];
                    z[j] = (xs[k][j] + lambda * yj) / (1.0 + lambda);
                }
                init.positions.push_back(z);
            }
        } else {
            init = extra_inits[static_cast<std::size_t>(t - cfg.restarts)];
            if (init.size() != n)
                throw usage_error("optimize: warm-start size mismatch");
        }
        LloydResult run = lloyd_run(sc, lambda, mode, cfg, std::move(init),
                                    xs, ys);
        run.restart_index = t;
        if (!have_best || run.cost_trace.back() < best.cost_trace.back()) {
            best = std::move(run);
            have_best = true;
        }
    }
    return best;
}

}  // namespace relay
