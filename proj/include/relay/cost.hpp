#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "relay/density.hpp"
#include "relay/errors.hpp"
#include "relay/geometry.hpp"
#include "relay/quadrature.hpp"

namespace relay {

// Full problem instance: GT density, GR density, geometry and rate.
struct Scenario {
    Density fX;
    Density fY;
    double h = 0.0;    // relay altitude
    double r = 2.0;    // path-loss exponent
    double rho = 1.0;  // rate, enters as the scale (2^rho - 1)
    int n = 1;         // relay count

    Scenario(Density fx, Density fy, double h_ = 0.0, double r_ = 2.0,
             double rho_ = 1.0, int n_ = 1)
        : fX(std::move(fx)), fY(std::move(fy)), h(h_), r(r_), rho(rho_),
          n(n_) {
        if (fX.dim() != fY.dim())
            throw usage_error("scenario: GT and GR densities differ in dimension");
        if (!(h >= 0.0)) throw usage_error("scenario: h must be >= 0");
        if (!(r >= 1.0)) throw usage_error("scenario: r must be >= 1");
        if (!(rho >= 0.0)) throw usage_error("scenario: rho must be >= 0");
        if (n < 1) throw usage_error("scenario: n must be >= 1");
    }

    int dim() const { return fX.dim(); }
    double power_scale() const { return std::exp2(rho) - 1.0; }
};

struct Deployment {
    std::vector<Point> positions;

    std::size_t size() const { return positions.size(); }
};

enum class Mode { centralized, distributed };

inline std::string to_string(Mode m) {
    return m == Mode::centralized ? "centralized" : "distributed";
}

// Relay-selection rule. Distributed mode additionally carries the
// GR-side expected cost of each relay, precomputed from the deployment.
struct SelectionRule {
    Mode mode = Mode::centralized;
    double lambda = 0.0;
    std::vector<double> gr_side_costs;  // distributed mode only
};

struct PowerEstimate {
    double p_gt = 0.0;
    double p_uav = 0.0;
    double lagrangian = 0.0;
    double se_gt = 0.0;   // 0 for quadrature
    double se_uav = 0.0;  // 0 for quadrature
};

// Unscaled two-hop link cost (h^2 + ||a-b||^2)^(r/2).
inline double link_cost(const Point& a, const Point& b, int dim, double h,
                        double r) {
    const double q = h * h + sq_dist(a, b, dim);
    if (r == 2.0) return q;
    return std::pow(q, 0.5 * r);
}

// Expected GR-side cost of a relay at u: integral of d(u, y) over fY.
// Closed form for r = 2, composite quadrature otherwise (1-D) or
// Monte Carlo (2-D).
inline double gr_side_cost(const Point& u, const Density& fY, double h,
                           double r) {
    const int dim = fY.dim();
    if (r == 2.0)
        return h * h + sq_dist(u, fY.mean(), dim) + fY.variance_trace();
    if (dim == 1) {
        double s = 0.0;
        for (const auto& n : density_nodes(fY, 64, 8))
            s += n.w * link_cost(u, Point{n.x, 0.0}, 1, h, r);
        return s;
    }
    // deterministic MC fallback for d=2, general r
    const std::size_t count = 1 << 17;
    double s = 0.0;
    for (const auto& y : fY.sample(0x67c0de, count))
        s += link_cost(u, y, 2, h, r);
    return s / static_cast<double>(count);
}

inline std::vector<double> gr_side_costs(const Deployment& U,
                                         const Density& fY, double h,
                                         double r) {
    std::vector<double> out;
    out.reserve(U.size());
    for (const auto& u : U.positions) out.push_back(gr_side_cost(u, fY, h, r));
    return out;
}

// Relay index chosen for the pair (x, y); ties go to the lowest index.
// Distributed selection ignores y and uses the precomputed GR-side costs.
inline std::size_t select(const SelectionRule& rule, const Deployment& U,
                          const Point& x, const Point& y,
                          const Scenario& sc) {
    if (U.positions.empty()) throw usage_error("select: empty deployment");
    if (rule.mode == Mode::distributed &&
        rule.gr_side_costs.size() != U.size())
        throw usage_error(
            "select: distributed rule needs one gr_side_cost per relay");
    std::size_t best = 0;
    double best_cost = 0.0;
    for (std::size_t i = 0; i < U.size(); ++i) {
        const double gt = link_cost(x, U.positions[i], sc.dim(), sc.h, sc.r);
        const double gr = rule.mode == Mode::centralized
                              ? link_cost(U.positions[i], y, sc.dim(), sc.h,
                                          sc.r)
                              : rule.gr_side_costs[i];
        const double cost = gt + rule.lambda * gr;
        if (i == 0 || cost < best_cost) {
            best = i;
            best_cost = cost;
        }
    }
    return best;
}

struct EvalConfig {
    enum class Method { monte_carlo, quadrature };
    Method method = Method::quadrature;
    std::uint64_t seed = 1;
    std::size_t samples = 200000;  // monte_carlo
    int quad_segments = 128;       // per box, quadrature
    int quad_order = 8;

    static EvalConfig monte_carlo(std::uint64_t seed, std::size_t samples) {
        EvalConfig c;
        c.method = Method::monte_carlo;
        c.seed = seed;
        c.samples = samples;
        return c;
    }
    static EvalConfig quadrature(int segments = 128, int order = 8) {
        EvalConfig c;
        c.method = Method::quadrature;
        c.quad_segments = segments;
        c.quad_order = order;
        return c;
    }
};

// Average GT and UAV powers of a deployment under a selection rule,
// scaled by (2^rho - 1). Deterministic for a fixed seed; single fixed
// reduction order so results do not depend on the host.
inline PowerEstimate evaluate(const Deployment& U, const SelectionRule& rule,
                              const Scenario& sc, const EvalConfig& cfg) {
    if (U.positions.empty()) throw usage_error("evaluate: empty deployment");
    for (const auto& u : U.positions)
        if (!finite(u, sc.dim()))
            throw usage_error("evaluate: non-finite relay position");
    const double scale = sc.power_scale();
    PowerEstimate est;

    if (cfg.method == EvalConfig::Method::quadrature) {
        if (sc.dim() != 1)
            throw usage_error("evaluate: quadrature is available for d=1 only");
        const auto nx = density_nodes(sc.fX, cfg.quad_segments, cfg.quad_order);
        const auto ny = density_nodes(sc.fY, cfg.quad_segments, cfg.quad_order);
        double gt = 0.0, uav = 0.0;
        for (const auto& qx : nx) {
            const Point x{qx.x, 0.0};
            for (const auto& qy : ny) {
                const Point y{qy.x, 0.0};
                const std::size_t i = select(rule, U, x, y, sc);
                const double w = qx.w * qy.w;
                gt += w * link_cost(x, U.positions[i], 1, sc.h, sc.r);
                uav += w * link_cost(U.positions[i], y, 1, sc.h, sc.r);
            }
        }
        est.p_gt = scale * gt;
        est.p_uav = scale * uav;
    } else {
        if (cfg.samples < 1000)
            throw usage_error("evaluate: need at least 10^3 samples");
        const auto xs = sc.fX.sample(rng::derive(cfg.seed, 0xA11CE), cfg.samples);
        const auto ys = sc.fY.sample(rng::derive(cfg.seed, 0xB0B), cfg.samples);
        double gt = 0.0, uav = 0.0, gt2 = 0.0, uav2 = 0.0;
        for (std::size_t k = 0; k < cfg.samples; ++k) {
            const std::size_t i = select(rule, U, xs[k], ys[k], sc);
            const double a = link_cost(xs[k], U.positions[i], sc.dim(), sc.h,
                                       sc.r);
            const double b = link_cost(U.positions[i], ys[k], sc.dim(), sc.h,
                                       sc.r);
            gt += a;
            uav += b;
            gt2 += a * a;
            uav2 += b * b;
        }
        const double nd = static_cast<double>(cfg.samples);
        est.p_gt = scale * gt / nd;
        est.p_uav = scale * uav / nd;
        const double var_gt = std::max(0.0, gt2 / nd - (gt / nd) * (gt / nd));
        const double var_uav =
            std::max(0.0, uav2 / nd - (uav / nd) * (uav / nd));
        est.se_gt = scale * std::sqrt(var_gt / nd);
        est.se_uav = scale * std::sqrt(var_uav / nd);
    }
    est.lagrangian = est.p_gt + rule.lambda * est.p_uav;
    return est;
}

}  // namespace relay
