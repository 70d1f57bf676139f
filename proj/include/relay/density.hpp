#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "relay/errors.hpp"
#include "relay/geometry.hpp"
#include "relay/rng.hpp"

namespace relay {

// Axis-aligned box with finite corners and strictly positive volume.
struct Box {
    Point lo{};
    Point hi{};

    double volume(int dim) const {
        double v = 1.0;
        for (int j = 0; j < dim; ++j) v *= hi[j] - lo[j];
        return v;
    }
    bool contains(const Point& p, int dim) const {
        for (int j = 0; j < dim; ++j)
            if (p[j] < lo[j] || p[j] > hi[j]) return false;
        return true;
    }
};

struct MixtureComponent {
    double weight = 0.0;
    Box box{};
};

// Finite mixture of uniform boxes over R^d. Immutable after construction;
// all moments are available in closed form.
class Density {
  public:
    Density(int dim, std::vector<MixtureComponent> components)
        : dim_(dim), components_(std::move(components)) {
        if (dim_ != 1 && dim_ != 2)
            throw usage_error("density dimension must be 1 or 2, got " +
                              std::to_string(dim_));
        if (components_.empty())
            throw usage_error("density needs at least one component");
        double sum = 0.0;
        for (const auto& c : components_) {
            if (!(c.weight > 0.0))
                throw usage_error("component weight must be strictly positive");
            for (int j = 0; j < dim_; ++j) {
                if (!std::isfinite(c.box.lo[j]) || !std::isfinite(c.box.hi[j]))
                    throw usage_error("box corners must be finite");
                if (!(c.box.lo[j] < c.box.hi[j]))
                    throw usage_error("box must have strictly positive volume");
            }
            sum += c.weight;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw usage_error("weights sum " + std::to_string(sum));
        cum_weights_.reserve(components_.size());
        double acc = 0.0;
        for (const auto& c : components_) {
            acc += c.weight;
            cum_weights_.push_back(acc);
        }
        cum_weights_.back() = 1.0;
    }

    static Density uniform(int dim, const Point& lo, const Point& hi) {
        return Density(dim, {MixtureComponent{1.0, Box{lo, hi}}});
    }
    static Density uniform1(double lo, double hi) {
        return uniform(1, Point{lo, 0.0}, Point{hi, 0.0});
    }

    int dim() const { return dim_; }
    const std::vector<MixtureComponent>& components() const {
        return components_;
    }

    double pdf(const Point& p, int point_dim) const {
        if (point_dim != dim_)
            throw usage_error("pdf: point dimension " +
                              std::to_string(point_dim) +
                              " does not match density dimension " +
                              std::to_string(dim_));
        double v = 0.0;
        for (const auto& c : components_)
            if (c.box.contains(p, dim_)) v += c.weight / c.box.volume(dim_);
        return v;
    }
    double pdf(const Point& p) const { return pdf(p, dim_); }

    Point mean() const {
        Point m{0.0, 0.0};
        for (const auto& c : components_)
            for (int j = 0; j < dim_; ++j)
                m[j] += c.weight * 0.5 * (c.box.lo[j] + c.box.hi[j]);
        return m;
    }

    // E||X||^2, from the per-axis uniform second moment (a^2 + ab + b^2)/3.
    double second_moment() const {
        double s = 0.0;
        for (const auto& c : components_)
            for (int j = 0; j < dim_; ++j) {
                const double a = c.box.lo[j], b = c.box.hi[j];
                s += c.weight * (a * a + a * b + b * b) / 3.0;
            }
        return s;
    }

    // Trace of the covariance: E||X||^2 - ||E X||^2.
    double variance_trace() const {
        return second_moment() - sq_norm(mean(), dim_);
    }

    Point support_lo() const {
        Point lo{components_[0].box.lo};
        for (const auto& c : components_)
            for (int j = 0; j < dim_; ++j) lo[j] = std::min(lo[j], c.box.lo[j]);
        return lo;
    }
    Point support_hi() const {
        Point hi{components_[0].box.hi};
        for (const auto& c : components_)
            for (int j = 0; j < dim_; ++j) hi[j] = std::max(hi[j], c.box.hi[j]);
        return hi;
    }

    // Marginal CDF along axis 0 (1-D use only).
    double cdf1(double x) const {
        double s = 0.0;
        for (const auto& c : components_) {
            const double a = c.box.lo[0], b = c.box.hi[0];
            s += c.weight * std::clamp((x - a) / (b - a), 0.0, 1.0);
        }
        return s;
    }

    // Deterministic counter-based sampling: sample i is a pure function of
    // (seed, i), so repeated calls with the same seed return identical lists.
    std::vector<Point> sample(std::uint64_t seed, std::size_t count) const {
        if (count == 0) throw usage_error("sample: count must be >= 1");
        std::vector<Point> out(count, Point{0.0, 0.0});
        for (std::size_t i = 0; i < count; ++i) {
            const double u = rng::uniform01(seed, 0, i);
            const auto it = std::upper_bound(cum_weights_.begin(),
                                             cum_weights_.end(), u);
            const std::size_t k = std::min<std::size_t>(
                static_cast<std::size_t>(it - cum_weights_.begin()),
                components_.size() - 1);
            const Box& box = components_[k].box;
            for (int j = 0; j < dim_; ++j) {
                const double t = rng::uniform01(seed, 1 + j, i);
                out[i][j] = box.lo[j] + t * (box.hi[j] - box.lo[j]);
            }
        }
        return out;
    }

    bool boxes_pairwise_disjoint() const {
        for (std::size_t a = 0; a < components_.size(); ++a)
            for (std::size_t b = a + 1; b < components_.size(); ++b) {
                bool overlap = true;
                for (int j = 0; j < dim_; ++j) {
                    const double lo = std::max(components_[a].box.lo[j],
                                               components_[b].box.lo[j]);
                    const double hi = std::min(components_[a].box.hi[j],
                                               components_[b].box.hi[j]);
                    if (!(lo < hi)) overlap = false;
                }
                if (overlap) return false;
            }
        return true;
    }

  private:
    int dim_;
    std::vector<MixtureComponent> components_;
    std::vector<double> cum_weights_;
};

// Piecewise-constant density on a regular grid; numerical carrier for the
// convolved Z-density and for point densities.
struct GridDensity {
    int dim = 1;
    Point origin{0.0, 0.0};
    double cell = 1.0;
    // Row-major: index = iy * nx + ix (nx cells along axis 0).
    std::size_t nx = 0;
    std::size_t ny = 1;
    std::vector<double> values;

    GridDensity(int dim_, Point origin_, double cell_, std::size_t nx_,
                std::size_t ny_, std::vector<double> values_)
        : dim(dim_),
          origin(origin_),
          cell(cell_),
          nx(nx_),
          ny(ny_),
          values(std::move(values_)) {
        if (dim != 1 && dim != 2)
            throw usage_error("grid density dimension must be 1 or 2");
        if (!(cell > 0.0)) throw usage_error("grid cell size must be > 0");
        if (dim == 1) ny = 1;
        if (values.size() != nx * ny)
            throw usage_error("grid value count does not match nx*ny");
        for (double v : values)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw usage_error("grid values must be finite and nonnegative");
        const double total = integral();
        if (std::abs(total - 1.0) > 1e-9)
            throw usage_error("grid density integrates to " +
                              std::to_string(total) + ", expected 1");
    }

    double cell_volume() const { return dim == 1 ? cell : cell * cell; }

    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * cell_volume();
    }

    double pdf(const Point& p) const {
        const auto ix = static_cast<std::ptrdiff_t>(
            std::floor((p[0] - origin[0]) / cell));
        if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(nx)) return 0.0;
        std::ptrdiff_t iy = 0;
        if (dim == 2) {
            iy = static_cast<std::ptrdiff_t>(
                std::floor((p[1] - origin[1]) / cell));
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(ny)) return 0.0;
        }
        return values[static_cast<std::size_t>(iy) * nx +
                      static_cast<std::size_t>(ix)];
    }

    // Divides values so the integral is exactly the unit mass (up to
    // rounding); used by builders before the invariant check.
    static std::vector<double> normalized(std::vector<double> v,
                                          double cell_volume) {
        double s = 0.0;
        for (double x : v) s += x;
        const double scale = 1.0 / (s * cell_volume);
        for (double& x : v) x *= scale;
        return v;
    }
};

struct MomentSet {
    double c0 = 0.0;  // E||X - Y||^2
    double c1 = 0.0;  // ||E X - E Y||^2
    double c2 = 0.0;  // E||X - E Y||^2
    double cX = 0.0;  // tr Cov X
    double cY = 0.0;  // tr Cov Y
    Point meanX{0.0, 0.0};
    Point meanY{0.0, 0.0};
};

// Closed-form moment block for independent X ~ fX, Y ~ fY.
inline MomentSet moments(const Density& fX, const Density& fY) {
    if (fX.dim() != fY.dim())
        throw usage_error("moments: density dimensions differ");
    MomentSet m;
    m.meanX = fX.mean();
    m.meanY = fY.mean();
    m.cX = fX.variance_trace();
    m.cY = fY.variance_trace();
    m.c1 = sq_dist(m.meanX, m.meanY, fX.dim());
    m.c2 = m.cX + m.c1;
    m.c0 = m.cX + m.cY + m.c1;
    return m;
}

// Cell-averaged rasterization of a mixture onto a regular grid covering its
// support; exact per-cell masses.
inline GridDensity rasterize(const Density& f, std::size_t resolution) {
    if (resolution < 2) throw usage_error("rasterize: resolution must be >= 2");
    const Point lo = f.support_lo();
    const Point hi = f.support_hi();
    if (f.dim() == 1) {
        const double cell = (hi[0] - lo[0]) / static_cast<double>(resolution);
        std::vector<double> v(resolution, 0.0);
        for (std::size_t i = 0; i < resolution; ++i) {
            const double a = lo[0] + static_cast<double>(i) * cell;
            const double mass = f.cdf1(a + cell) - f.cdf1(a);
            v[i] = mass / cell;
        }
        return GridDensity(1, lo, cell, resolution, 1,
                           GridDensity::normalized(std::move(v), cell));
    }
    const double cell = std::max(hi[0] - lo[0], hi[1] - lo[1]) /
                        static_cast<double>(resolution);
    const auto ncx = static_cast<std::size_t>(
        std::ceil((hi[0] - lo[0]) / cell - 1e-12));
    const auto ncy = static_cast<std::size_t>(
        std::ceil((hi[1] - lo[1]) / cell - 1e-12));
    std::vector<double> v(ncx * ncy, 0.0);
    for (const auto& c : f.components()) {
        const double wd = c.weight / c.box.volume(2);
        for (std::size_t iy = 0; iy < ncy; ++iy) {
            const double y0 = lo[1] + static_cast<double>(iy) * cell;
            const double oy = std::max(
                0.0, std::min(y0 + cell, c.box.hi[1]) -
                         std::max(y0, c.box.lo[1]));
            if (oy <= 0.0) continue;
            for (std::size_t ix = 0; ix < ncx; ++ix) {
                const double x0 = lo[0] + static_cast<double>(ix) * cell;
                const double ox = std::max(
                    0.0, std::min(x0 + cell, c.box.hi[0]) -
                             std::max(x0, c.box.lo[0]));
                if (ox <= 0.0) continue;
                v[iy * ncx + ix] += wd * ox * oy / (cell * cell);
            }
        }
    }
    return GridDensity(2, lo, cell, ncx, ncy,
                       GridDensity::normalized(std::move(v), cell * cell));
}

// (int f^p)^(1/p). Exact for mixtures with pairwise-disjoint boxes;
// grid quadrature otherwise.
inline double p_norm(const Density& f, double p) {
    if (!(p > 0.0)) throw usage_error("p_norm: p must be > 0");
    if (f.boxes_pairwise_disjoint()) {
        double s = 0.0;
        for (const auto& c : f.components()) {
            const double vol = c.box.volume(f.dim());
            s += std::pow(c.weight / vol, p) * vol;
        }
        return std::pow(s, 1.0 / p);
    }
    const std::size_t res = f.dim() == 1 ? 1 << 16 : 1 << 10;
    GridDensity g = rasterize(f, res);
    double s = 0.0;
    for (double v : g.values) s += std::pow(v, p);
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

inline double p_norm(const GridDensity& g, double p) {
    if (!(p > 0.0)) throw usage_error("p_norm: p must be > 0");
    double s = 0.0;
    for (double v : g.values) s += std::pow(v, p);
    return std::pow(s * g.cell_volume(), 1.0 / p);
}

// Density of Z = (X + lambda*Y) / (1 + lambda) for d = 1, via discrete
// convolution of the cell-averaged scaled marginals.
inline GridDensity combine_z(const Density& fX, const Density& fY,
                             double lambda, std::size_t resolution = 1024) {
    if (fX.dim() != 1 || fY.dim() != 1)
        throw unsupported_error("combine_z supports d = 1 only");
    if (!(lambda >= 0.0)) throw usage_error("combine_z: lambda must be >= 0");
    if (resolution < 64)
        throw usage_error("combine_z: resolution must be >= 64");

    const double a = 1.0 / (1.0 + lambda);
    const double b = lambda / (1.0 + lambda);
    if (b == 0.0) return rasterize(fX, resolution);

    const double loX = fX.support_lo()[0], hiX = fX.support_hi()[0];
    const double loY = fY.support_lo()[0], hiY = fY.support_hi()[0];
    const double wA = a * (hiX - loX);
    const double wB = b * (hiY - loY);
    const double cell = (wA + wB) / static_cast<double>(resolution);

    // Cell masses of the scaled marginals aX and bY; a support narrower than
    // one cell degenerates to a single full-mass cell.
    const auto masses = [cell](const Density& f, double scale, double lo,
                               double width) {
        const auto n = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(width / cell - 1e-12)));
        std::vector<double> m(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double t0 = (lo + static_cast<double>(i) * cell) / scale;
            const double t1 = (lo + static_cast<double>(i + 1) * cell) / scale;
            m[i] = f.cdf1(t1) - f.cdf1(t0);
        }
        m.back() += 1.0 - f.cdf1((lo + static_cast<double>(n) * cell) / scale);
        return m;
    };
    const std::vector<double> mA = masses(fX, a, a * loX, wA);
    const std::vector<double> mB = masses(fY, b, b * loY, wB);

    std::vector<double> out(mA.size() + mB.size() - 1, 0.0);
    for (std::size_t i = 0; i < mA.size(); ++i)
        for (std::size_t j = 0; j < mB.size(); ++j)
            out[i + j] += mA[i] * mB[j];
    // out now holds cell masses of the sum; convert to densities.
    for (double& v : out) v /= cell;
    const std::size_t cells = out.size();
    return GridDensity(1, Point{a * loX + b * loY, 0.0}, cell, cells, 1,
                       GridDensity::normalized(std::move(out), cell));
}

// Density of W = (X + lambda*E[Y]) / (1 + lambda): the exact affine image
// of fX (boxes shrunk by 1/(1+lambda) and shifted toward meanY).
inline Density combine_w(const Density& fX, const Point& meanY,
                         double lambda) {
    if (!(lambda >= 0.0)) throw usage_error("combine_w: lambda must be >= 0");
    const double a = 1.0 / (1.0 + lambda);
    const double b = lambda / (1.0 + lambda);
    std::vector<MixtureComponent> comps = fX.components();
    for (auto& c : comps)
        for (int j = 0; j < fX.dim(); ++j) {
            c.box.lo[j] = a * c.box.lo[j] + b * meanY[j];
            c.box.hi[j] = a * c.box.hi[j] + b * meanY[j];
        }
    return Density(fX.dim(), std::move(comps));
}

}  // namespace relay
