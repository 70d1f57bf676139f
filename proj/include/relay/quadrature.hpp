#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "relay/density.hpp"
#include "relay/errors.hpp"

namespace relay {

struct QuadratureNode {
    double x = 0.0;
    double w = 0.0;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre recurrence (classic gauleg).
inline std::vector<QuadratureNode> gauss_legendre(int order) {
    if (order < 1) throw usage_error("gauss_legendre: order must be >= 1");
    std::vector<QuadratureNode> nodes(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = {-z, w};
        nodes[order - 1 - i] = {z, w};
    }
    return nodes;
}

// Composite Gauss-Legendre nodes for integration against a 1-D mixture
// density: weights include the pdf factor and sum to 1.
inline std::vector<QuadratureNode> density_nodes(const Density& f,
                                                 int segments_per_box,
                                                 int order) {
    if (f.dim() != 1)
        throw usage_error("density_nodes: 1-D densities only");
    if (segments_per_box < 1)
        throw usage_error("density_nodes: segments must be >= 1");
    const auto gl = gauss_legendre(order);
    std::vector<QuadratureNode> out;
    out.reserve(f.components().size() * segments_per_box * gl.size());
    for (const auto& c : f.components()) {
        const double width = c.box.hi[0] - c.box.lo[0];
        const double seg = width / segments_per_box;
        for (int s = 0; s < segments_per_box; ++s) {
            const double a = c.box.lo[0] + s * seg;
            const double mid = a + 0.5 * seg;
            for (const auto& n : gl) {
                // glw * (seg/2) * pdf, pdf = weight/width on the box
                out.push_back({mid + 0.5 * seg * n.x,
                               n.w * 0.5 * seg * c.weight / width});
            }
        }
    }
    return out;
}

}  // namespace relay
