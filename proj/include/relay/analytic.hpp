#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "relay/cost.hpp"
#include "relay/density.hpp"
#include "relay/errors.hpp"
#include "relay/geometry.hpp"

namespace relay {

struct TradeoffPoint {
    double lambda = 0.0;
    double p_uav = 0.0;
    double p_gt = 0.0;
};

enum class CurveKind { single_relay, centralized, distributed };

struct TradeoffCurve {
    CurveKind kind = CurveKind::single_relay;
    std::vector<TradeoffPoint> points;
    double p_min = 0.0;
    double p_max = 0.0;
};

struct SingleUavPoint {
    double p_uav = 0.0;
    double p_gt = 0.0;
    Point u1{0.0, 0.0};
};

// Single-relay tradeoff for r = 2, parameterized by lambda; the optimal
// relay sits at (EX + lambda*EY)/(1 + lambda). A positive altitude adds
// h^2 to both powers.
inline SingleUavPoint single_uav_point(const MomentSet& m, double lambda,
                                       double h = 0.0) {
    if (!(lambda >= 0.0))
        throw usage_error("single_uav_point: lambda must be >= 0");
    SingleUavPoint out;
    const double s = (1.0 + lambda) * (1.0 + lambda);
    out.p_uav = h * h + m.cY + m.c1 / s;
    out.p_gt = h * h + m.cX + m.c1 * lambda * lambda / s;
    for (int j = 0; j < 2; ++j)
        out.u1[j] = (m.meanX[j] + lambda * m.meanY[j]) / (1.0 + lambda);
    return out;
}

// Minimum GT power at UAV power budget p, single relay, r = 2.
inline double single_uav_pgt(const MomentSet& m, double p, double h = 0.0) {
    const double lo = h * h + m.cY;
    const double hi = h * h + m.cY + m.c1;
    if (p < lo - 1e-12 || p > hi + 1e-12)
        throw std::domain_error(
            "single_uav_pgt: p outside [" + std::to_string(lo) + ", " +
            std::to_string(hi) + "]");
    const double t = std::sqrt(m.c1) - std::sqrt(std::max(0.0, p - lo));
    return h * h + m.cX + t * t;
}

// Asymptotic (n -> infinity) power pair at a given lambda, r = 2.
inline std::pair<double, double> asymptotic_tradeoff(const MomentSet& m,
                                                     double lambda, Mode mode,
                                                     double h = 0.0) {
    if (!(lambda >= 0.0))
        throw usage_error("asymptotic_tradeoff: lambda must be >= 0");
    const double s = (1.0 + lambda) * (1.0 + lambda);
    if (mode == Mode::centralized)
        return {h * h + m.c0 / s, h * h + m.c0 * lambda * lambda / s};
    return {h * h + m.cY + m.c2 / s,
            h * h + m.c2 * lambda * lambda / s};
}

// Asymptotic minimum GT power at UAV power budget p, r = 2.
inline double asymptotic_pgt(const MomentSet& m, double p, Mode mode,
                             double h = 0.0) {
    if (mode == Mode::centralized) {
        const double lo = h * h;
        const double hi = h * h + m.c0;
        if (p < lo - 1e-12 || p > hi + 1e-12)
            throw std::domain_error(
                "asymptotic_pgt: p outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
        const double t = std::sqrt(m.c0) - std::sqrt(std::max(0.0, p - lo));
        return h * h + t * t;
    }
    const double lo = h * h + m.cY;
    const double hi = h * h + m.cY + m.c2;
    if (p < lo - 1e-12 || p > hi + 1e-12)
        throw std::domain_error(
            "asymptotic_pgt: p outside [" + std::to_string(lo) + ", " +
            std::to_string(hi) + "]");
    const double t = std::sqrt(m.c2) - std::sqrt(std::max(0.0, p - lo));
    return h * h + t * t;
}

// Optimal point density l(z) = f(z)^(d/(d+r)) / normalizer on the grid.
inline GridDensity point_density(const GridDensity& f, double r) {
    const double e = static_cast<double>(f.dim) / (f.dim + r);
    std::vector<double> v(f.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(f.values[i], e);
    return GridDensity(f.dim, f.origin, f.cell, f.nx, f.ny,
                       GridDensity::normalized(std::move(v),
                                               f.cell_volume()));
}

inline GridDensity point_density(const Density& f, double r,
                                 std::size_t resolution = 4096) {
    return point_density(rasterize(f, resolution), r);
}

// Deployment at quantile levels (2i-1)/(2n) of the point density's CDF,
// with linear interpolation inside grid cells. 1-D only.
inline Deployment inverse_transform_deployment(const GridDensity& ell,
                                               int n) {
    if (ell.dim != 1)
        throw unsupported_error(
            "inverse_transform_deployment supports d = 1 only");
    if (n < 1) throw usage_error("inverse_transform_deployment: n >= 1");
    std::vector<double> cum(ell.nx + 1, 0.0);
    for (std::size_t i = 0; i < ell.nx; ++i)
        cum[i + 1] = cum[i] + ell.values[i] * ell.cell;
    const double total = cum.back();
    Deployment out;
    std::size_t cell = 0;
    for (int i = 1; i <= n; ++i) {
        const double q = total * (2.0 * i - 1.0) / (2.0 * n);
        while (cell + 1 < cum.size() - 1 && cum[cell + 1] < q) ++cell;
        const double mass = cum[cell + 1] - cum[cell];
        const double frac = mass > 0.0 ? (q - cum[cell]) / mass : 0.5;
        out.positions.push_back(
            Point{ell.origin[0] + (static_cast<double>(cell) + frac) *
                                      ell.cell,
                  0.0});
    }
    return out;
}

inline constexpr double kZador21 = 1.0 / 12.0;
inline double zador22() { return 5.0 / (18.0 * std::sqrt(3.0)); }

// Leading-order minimal n-point quantizer distortion
// kappa * n^(-r/d) * ||f||_(d/(d+r)).
template <class DensityLike>
inline double zador_distortion(const DensityLike& f, int n, double r, int d,
                               double kappa = -1.0) {
    if (n < 1) throw usage_error("zador_distortion: n must be >= 1");
    if (kappa < 0.0) {
        if (r == 2.0 && d == 1) kappa = kZador21;
        else if (r == 2.0 && d == 2) kappa = zador22();
        else
            throw usage_error(
                "zador_distortion: no built-in constant for (r, d); supply "
                "kappa");
    }
    return kappa * std::pow(static_cast<double>(n), -r / d) *
           p_norm(f, static_cast<double>(d) / (d + r));
}

// Finite-n approximation of the optimal Lagrangian cost, r = 2.
// Centralized: lambda*c0/(1+lambda) + (1+lambda)*Zador(fZ, n);
// distributed: (c0*lambda + cY*lambda^2)/(1+lambda) + (1+lambda)*Zador(fW, n).
inline double asymptotic_lagrangian(const MomentSet& m, const GridDensity& f,
                                    double lambda, int n, Mode mode) {
    const double zad = zador_distortion(f, n, 2.0, f.dim);
    if (mode == Mode::centralized)
        return lambda * m.c0 / (1.0 + lambda) + (1.0 + lambda) * zad;
    return (m.c0 * lambda + m.cY * lambda * lambda) / (1.0 + lambda) +
           (1.0 + lambda) * zad;
}

}  // namespace relay
