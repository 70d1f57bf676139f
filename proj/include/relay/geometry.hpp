#pragma once

#include <array>
#include <cmath>

namespace relay {

// Point in R^d with d in {1, 2}; for d = 1 only the first coordinate is used
// and the second is kept at zero.
using Point = std::array<double, 2>;

inline double sq_dist(const Point& a, const Point& b, int dim) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) {
        const double t = a[j] - b[j];
        s += t * t;
    }
    return s;
}

inline double sq_norm(const Point& a, int dim) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += a[j] * a[j];
    return s;
}

inline bool finite(const Point& a, int dim) {
    for (int j = 0; j < dim; ++j)
        if (!std::isfinite(a[j])) return false;
    return true;
}

}  // namespace relay
