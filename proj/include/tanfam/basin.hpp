#pragma once

// Membership in the immediate basin B0 of the origin.
//
// Pointwise test: let K be the first time f^K(w) enters a disk contained in B0. The segment
// from f^K(w) to 0 is lifted back along the orbit one inverse step at a time; each
// lifted path is cut short once it enters that disk and closed with a segment
// to 0. The point lies in the component of f^-K(disk) containing 0 exactly when
// every lift ends in the disk; otherwise the final lift ends at a non-zero
// preimage of 0.
//
// Raster test: the attracted-to-zero set is rendered on a grid and B0 is taken to
// be the 4-connected component containing the origin.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tanfam/ccl.hpp"
#include "tanfam/complex.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"

namespace tanfam {

enum class Membership { Inside, Outside, Unknown };

/// Radius R of a disk contained in B0: on |z| <= R < (pi/2)^(1/q), positive Taylor
/// coefficients of tan give |f(z)| <= |lambda| tan^p(R^q) |z| / R, so the disk maps
/// into itself with contraction whenever |lambda| tan^p(R^q) <= 0.9 R.
inline double basin_disk_radius(const Family& f) {
    const double scale = std::abs(f.lambda());
    auto contracting = [&](double r) {
        return scale * std::pow(std::tan(std::pow(r, f.q())), f.p()) <= 0.9 * r;
    };
    double lo = 0.0;
    double hi = std::pow(pi / 2, 1.0 / f.q()) * (1.0 - 1e-12);
    if (contracting(hi)) return hi;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (contracting(mid) ? lo : hi) = mid;
    }
    return lo;
}

namespace detail {

inline constexpr int kMaxLiftSplits = 20;
inline constexpr std::size_t kMaxPathVertices = 20000;

class PathLifter {
public:
    PathLifter(const Family& f, double trap) : f_(f), trap_(trap) {}

    // Lifts the polyline `path` (path[0] = f(start)) through f starting at `start`.
    // Returns the lifted polyline, truncated at trap entry and closed toward 0.
    // `entered` reports whether the trap was reached.
    std::optional<std::vector<Complex>> lift(const std::vector<Complex>& path, Complex start, bool& entered) {
        std::vector<Complex> lifted{start};
        entered = std::abs(start) < trap_;
        if (entered) {
            close_to_origin(lifted);
            return lifted;
        }
        Complex x = start;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (!lift_segment(x, path[i], path[i + 1], 0, lifted)) return std::nullopt;
            if (lifted.size() > kMaxPathVertices) return std::nullopt;
            if (std::abs(x) < trap_) {
                entered = true;
                close_to_origin(lifted);
                return lifted;
            }
        }
        return lifted;
    }

    // Segment from `from` to (almost) 0, sampled geometrically: lifts approach
    // critical points of f where preimages scale like a root of the target.
    static std::vector<Complex> segment_to_origin(Complex from) {
        std::vector<Complex> out;
        double scale = 1.0;
        for (int i = 0; i <= 30; ++i, scale *= 0.5) out.push_back(from * scale);
        return out;
    }

private:
    void close_to_origin(std::vector<Complex>& lifted) const {
        const auto tail = segment_to_origin(lifted.back());
        lifted.insert(lifted.end(), tail.begin() + 1, tail.end());
    }

    bool lift_segment(Complex& x, Complex a, Complex b, int depth, std::vector<Complex>& out) {
        if (depth > kMaxLiftSplits) return false;
        const Extended d = eval_derivative(f_, x);
        bool ok = d.finite() && std::abs(d.value) > 1e-300;
        Complex y{};
        if (ok) {
            const Complex dx = (b - a) / d.value;
            const Complex predicted = x + dx;
            ok = std::abs(dx) < 0.1 * (1.0 + std::abs(x));
            y = predicted;
            bool converged = false;
            for (int it = 0; ok && it < 8; ++it) {
                const Extended fy = eval(f_, y);
                const Extended dy = eval_derivative(f_, y);
                if (fy.at_infinity || dy.at_infinity || std::abs(dy.value) < 1e-300) { ok = false; break; }
                const Complex r = fy.value - b;
                if (std::abs(r) <= 1e-13 * (1.0 + std::abs(b))) { converged = true; break; }
                y -= r / dy.value;
            }
            ok = ok && converged && std::abs(y - predicted) <= 0.25 * std::abs(dx) + 1e-13 * (1.0 + std::abs(y)) &&
                 std::abs(y) < kEscapeRadius;
        }
        if (ok) {
            x = y;
            out.push_back(y);
            return true;
        }
        const Complex mid = 0.5 * (a + b);
        return lift_segment(x, a, mid, depth + 1, out) && lift_segment(x, mid, b, depth + 1, out);
    }

    const Family& f_;
    double trap_;
};

} // namespace detail

/// B0 membership of orbit[0] given its orbit up to (and including) the first point
/// inside the disk |z| < trap, which must be contained in B0 and forward invariant.
/// On Inside, `path` (when given) receives a polyline in B0 from orbit[0] to near 0.
inline Membership membership_from_orbit(const Family& f, const std::vector<Complex>& orbit, double trap,
                                        std::vector<Complex>* path_out = nullptr) {
    if (orbit.empty() || std::abs(orbit.back()) >= trap) return Membership::Unknown;
    const std::size_t entry = orbit.size() - 1;
    std::vector<Complex> path = detail::PathLifter::segment_to_origin(orbit[entry]);
    if (entry > 0) {
        detail::PathLifter lifter(f, trap);
        for (std::size_t level = entry; level-- > 0;) {
            bool entered = false;
            auto lifted = lifter.lift(path, orbit[level], entered);
            if (!lifted) return Membership::Unknown;
            if (!entered) return Membership::Outside;
            path = std::move(*lifted);
        }
    }
    if (path_out) *path_out = std::move(path);
    return Membership::Inside;
}

inline Membership in_immediate_basin(const Family& f, Complex w, int max_iter = kDefaultMaxIter,
                                     std::vector<Complex>* path_out = nullptr) {
    const double disk = std::max(basin_disk_radius(f), trap_radius(f));
    const OrbitTrace trace = iterate_orbit(f, w, max_iter, disk);
    if (trace.end == OrbitEnd::AtInfinity || trace.end == OrbitEnd::Escaped) return Membership::Outside;
    if (trace.end != OrbitEnd::TrapEntry && trace.end != OrbitEnd::FixedAtZero) return Membership::Unknown;
    return membership_from_orbit(f, trace.points, disk, path_out);
}

/// Minimal n with f^n(v) in B0 by the pointwise test; nullopt when v is not
/// attracted to 0 or a lift could not be completed.
inline std::optional<int> capture_index_exact(const Family& f, Complex v, int max_iter) {
    const double trap = std::max(basin_disk_radius(f), trap_radius(f));
    const OrbitTrace trace = iterate_orbit(f, v, max_iter, trap);
    if (trace.end != OrbitEnd::TrapEntry && trace.end != OrbitEnd::FixedAtZero) return std::nullopt;
    for (std::size_t n = 0; n < trace.points.size(); ++n) {
        const std::vector<Complex> tail(trace.points.begin() + static_cast<std::ptrdiff_t>(n), trace.points.end());
        const Membership m = membership_from_orbit(f, tail, trap);
        if (m == Membership::Inside) return static_cast<int>(n);
        if (m == Membership::Unknown) return std::nullopt;
    }
    return std::nullopt;
}

struct Window {
    double x0 = -2.0;
    double x1 = 2.0;
    double y0 = -2.0;
    double y1 = 2.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

/// Position of sample `twice_index` / (2 n) between a and b, exactly antisymmetric
/// under index mirroring when a = -b.
inline double lerp_half(double a, double b, std::int64_t twice_index, std::int64_t n) {
    const auto left = static_cast<double>(2 * n - twice_index);
    const auto right = static_cast<double>(twice_index);
    return (a * left + b * right) / static_cast<double>(2 * n);
}

/// Cell-center sample point; row 0 is the top row (largest imaginary part).
inline Complex cell_center(const Window& w, int width, int height, int ix, int iy) {
    return {lerp_half(w.x0, w.x1, 2 * std::int64_t{ix} + 1, width), lerp_half(w.y1, w.y0, 2 * std::int64_t{iy} + 1, height)};
}

inline std::optional<std::pair<int, int>> cell_of(const Window& w, int width, int height, Complex z) {
    const double fx = (z.real() - w.x0) / w.width() * width;
    const double fy = (w.y1 - z.imag()) / w.height() * height;
    if (!(fx >= 0.0 && fy >= 0.0 && fx < width && fy < height)) return std::nullopt;
    return std::pair<int, int>{static_cast<int>(fx), static_cast<int>(fy)};
}

/// Immediate basin rendered on a grid: mask of the component containing the origin.
struct BasinRaster {
    Window window;
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> in_b0;

    bool contains(Complex z) const {
        const auto cell = cell_of(window, width, height, z);
        if (!cell) return false;
        return in_b0[static_cast<std::size_t>(cell->second) * width + cell->first] != 0;
    }
};

inline BasinRaster render_immediate_basin(const Family& f, const Window& window, int width, int height,
                                          int max_iter = kDefaultMaxIter) {
    const double trap = trap_radius(f);
    std::vector<std::uint8_t> attracted(static_cast<std::size_t>(width) * height, 0);
    for (int iy = 0; iy < height; ++iy)
        for (int ix = 0; ix < width; ++ix) {
            const Complex z = cell_center(window, width, height, ix, iy);
            const auto cls = classify_point(f, z, max_iter, trap);
            attracted[static_cast<std::size_t>(iy) * width + ix] = cls.kind == OrbitClass::Kind::AttractedToZero;
        }
    const Labeling lab = label_components<std::uint8_t>(width, height, attracted, 0);
    BasinRaster out{window, width, height, std::vector<std::uint8_t>(attracted.size(), 0)};
    const auto origin = cell_of(window, width, height, Complex{});
    if (!origin) return out;
    const std::int32_t target = lab.labels[static_cast<std::size_t>(origin->second) * width + origin->first];
    if (target < 0) return out;
    for (std::size_t i = 0; i < lab.labels.size(); ++i) out.in_b0[i] = lab.labels[i] == target;
    return out;
}

/// Minimal n with f^n(v) inside the rasterized B0. The square window is centered
/// at 0 and covers the orbit of v up to trap entry with margin.
inline std::optional<int> capture_index_raster(const Family& f, Complex v, int resolution,
                                               int max_iter = kDefaultMaxIter) {
    const double trap = trap_radius(f);
    const OrbitTrace trace = iterate_orbit(f, v, max_iter, trap);
    if (trace.end != OrbitEnd::TrapEntry && trace.end != OrbitEnd::FixedAtZero) return std::nullopt;
    double radius = 2.0;
    for (const Complex& z : trace.points) radius = std::max(radius, 1.25 * std::abs(z));
    // odd resolution puts a cell center on the origin
    const int res = resolution | 1;
    const BasinRaster basin = render_immediate_basin(f, {-radius, radius, -radius, radius}, res, res, max_iter);
    for (std::size_t n = 0; n < trace.points.size(); ++n)
        if (std::abs(trace.points[n]) < trap || basin.contains(trace.points[n])) return static_cast<int>(n);
    return std::nullopt;
}

} // namespace tanfam
