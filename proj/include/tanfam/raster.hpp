#pragma once

// Dynamic- and parameter-plane atlases: per-cell classification over a window,
// PPM / CSV emission and a connected-component census.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "tanfam/basin.hpp"
#include "tanfam/ccl.hpp"
#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"
#include "tanfam/parameter.hpp"

namespace tanfam {

/// Legend tags. Dynamic rasters use Zero..Undecided, parameter rasters use Capture,
/// Shell and Undecided.
enum class Tag : std::uint8_t { Zero, Cycle, Neutral, Pole, Undecided, Capture, Shell };

inline const char* to_string(Tag t) {
    switch (t) {
    case Tag::Zero: return "zero";
    case Tag::Cycle: return "cycle";
    case Tag::Neutral: return "neutral";
    case Tag::Pole: return "pole";
    case Tag::Undecided: return "undecided";
    case Tag::Capture: return "capture";
    case Tag::Shell: return "shell";
    }
    return "?";
}

struct Cell {
    Tag tag = Tag::Undecided;
    int aux1 = 0;      ///< steps (zero, pole, undecided), period (cycle, neutral, shell) or capture index
    double aux2 = 0.0; ///< multiplier modulus for cycles and shells, 0 otherwise

    /// Class identity used for majority votes and the census.
    std::int64_t key() const {
        const bool indexed = tag == Tag::Cycle || tag == Tag::Neutral || tag == Tag::Capture || tag == Tag::Shell;
        return static_cast<std::int64_t>(tag) * (std::int64_t{1} << 32) + (indexed ? aux1 : 0);
    }
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Raster {
    Window window;
    int width = 0;
    int height = 0;
    std::vector<Cell> cells;

    const Cell& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * width + ix]; }
    Complex center(int ix, int iy) const { return cell_center(window, width, height, ix, iy); }
};

/// Coordinates of a parameter window: lambda itself, or the lambda of the
/// conjugate family lambda tanh^p(z^q).
enum class ParamFrame : std::uint8_t { Tan, Tanh };

struct RenderOptions {
    Window window;
    ParamFrame frame = ParamFrame::Tan;
    int width = 256;
    int height = 256;
    int max_iter = kDefaultMaxIter;
    CaptureMode mode = CaptureMode::Exact;
    int workers = 1;
    int aa = 1; ///< aa x aa subsamples per cell, majority vote
};

namespace detail {

inline void validate(const RenderOptions& o) {
    if (o.width < 16 || o.height < 16) throw Error(ErrorKind::InvalidConfig, "resolution must be at least 16x16");
    if (!(o.window.x1 > o.window.x0) || !(o.window.y1 > o.window.y0) || !std::isfinite(o.window.width()) ||
        !std::isfinite(o.window.height()))
        throw Error(ErrorKind::InvalidConfig, "window must satisfy x0 < x1 and y0 < y1");
    if (o.max_iter < 1) throw Error(ErrorKind::InvalidConfig, "max_iter must be >= 1");
    if (o.workers < 1) throw Error(ErrorKind::InvalidConfig, "workers must be >= 1");
    if (o.aa < 1 || o.aa > 16) throw Error(ErrorKind::InvalidConfig, "aa must be in [1, 16]");
}

inline Cell cell_from(const OrbitClass& c) {
    switch (c.kind) {
    case OrbitClass::Kind::AttractedToZero: return {Tag::Zero, c.steps, 0.0};
    case OrbitClass::Kind::AttractedToCycle: return {Tag::Cycle, c.period, std::abs(c.multiplier)};
    case OrbitClass::Kind::NeutralCandidate: return {Tag::Neutral, c.period, std::abs(c.multiplier)};
    case OrbitClass::Kind::PoleEscape: return {Tag::Pole, c.steps, 0.0};
    case OrbitClass::Kind::Undecided: break;
    }
    return {Tag::Undecided, c.steps, 0.0};
}

inline Cell cell_from(const ParamClass& c) {
    switch (c.kind) {
    case ParamClass::Kind::Capture: return {Tag::Capture, c.n, 0.0};
    case ParamClass::Kind::Shell: return {Tag::Shell, c.period, std::abs(c.multiplier)};
    case ParamClass::Kind::Undecided: break;
    }
    return {Tag::Undecided, 0, 0.0};
}

/// Majority vote; ties go to the class seen first in sample order.
inline Cell vote(const std::vector<Cell>& samples) {
    std::size_t best = 0;
    int best_count = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        int count = 0;
        for (const Cell& s : samples) count += s.key() == samples[i].key();
        if (count > best_count) {
            best_count = count;
            best = i;
        }
    }
    return samples[best];
}

/// Classifies every cell with `sample`, rows handed out to workers; each row is
/// written only by the worker that claimed it.
inline Raster scan(const RenderOptions& o, const std::function<Cell(Complex)>& sample) {
    validate(o);
    Raster r{o.window, o.width, o.height, std::vector<Cell>(static_cast<std::size_t>(o.width) * o.height)};
    const std::int64_t sub_w = std::int64_t{o.width} * o.aa;
    const std::int64_t sub_h = std::int64_t{o.height} * o.aa;
    std::atomic<int> next_row{0};
    auto work = [&] {
        std::vector<Cell> samples;
        for (int iy = next_row++; iy < o.height; iy = next_row++) {
            for (int ix = 0; ix < o.width; ++ix) {
                Cell& out = r.cells[static_cast<std::size_t>(iy) * o.width + ix];
                if (o.aa == 1) {
                    out = sample(cell_center(o.window, o.width, o.height, ix, iy));
                    continue;
                }
                samples.clear();
                for (int sy = 0; sy < o.aa; ++sy)
                    for (int sx = 0; sx < o.aa; ++sx) {
                        const std::int64_t tx = 2 * (std::int64_t{ix} * o.aa + sx) + 1;
                        const std::int64_t ty = 2 * (std::int64_t{iy} * o.aa + sy) + 1;
                        samples.push_back(sample({lerp_half(o.window.x0, o.window.x1, tx, sub_w),
                                                  lerp_half(o.window.y1, o.window.y0, ty, sub_h)}));
                    }
                out = vote(samples);
            }
        }
    };
    const int n = std::min(o.workers, o.height);
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return r;
}

} // namespace detail

/// Dynamic plane of f: classify_point at each cell sample.
inline Raster render_dynamic(const Family& f, const RenderOptions& o) {
    const double trap = trap_radius(f);
    return detail::scan(o, [&](Complex z) { return detail::cell_from(classify_point(f, z, o.max_iter, trap)); });
}

/// Parameter plane of the (p, q) family: classify_parameter at each cell sample.
/// Cells where the family is not defined (lambda = 0) are Undecided.
/// In the Tanh frame the sample c stands for lambda_from_tanh(c, p, q).
inline Raster render_param(int p, int q, const RenderOptions& o) {
    Family::make(Complex{1.0, 0.0}, p, q);
    ParamOptions po;
    po.max_iter = o.max_iter;
    po.mode = o.mode;
    return detail::scan(o, [&](Complex c) {
        if (c == Complex{}) return Cell{};
        const Complex lambda = o.frame == ParamFrame::Tanh ? lambda_from_tanh(c, p, q) : c;
        try {
            return detail::cell_from(classify_parameter(Family::make(lambda, p, q), po));
        } catch (const Error&) {
            return Cell{};
        }
    });
}

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed legend: magenta basin of 0, black cycle basins, orange neutral candidates,
/// white poles, gray undecided, greens for capture components (C_0 brightest) and
/// yellow / cyan / red / blue for shells of period 1 / 2 / 3 / >= 4.
inline Rgb color_of(const Cell& c) {
    switch (c.tag) {
    case Tag::Zero: return {255, 0, 255};
    case Tag::Cycle: return {0, 0, 0};
    case Tag::Neutral: return {255, 140, 0};
    case Tag::Pole: return {255, 255, 255};
    case Tag::Undecided: return {128, 128, 128};
    case Tag::Capture: {
        static constexpr std::array<Rgb, 4> greens{{{0, 140, 0}, {120, 220, 120}, {0, 90, 40}, {160, 255, 60}}};
        if (c.aux1 <= 0) return {0, 210, 0};
        return greens[static_cast<std::size_t>(c.aux1 - 1) % greens.size()];
    }
    case Tag::Shell:
        switch (c.aux1) {
        case 1: return {255, 255, 0};
        case 2: return {0, 255, 255};
        case 3: return {255, 0, 0};
        default: return {0, 0, 255};
        }
    }
    return {128, 128, 128};
}

inline void write_ppm(std::ostream& out, const Raster& r) {
    out << "P6\n" << r.width << ' ' << r.height << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(r.width) * 3);
    for (int iy = 0; iy < r.height; ++iy) {
        for (int ix = 0; ix < r.width; ++ix) {
            const Rgb c = color_of(r.at(ix, iy));
            for (int k = 0; k < 3; ++k) row[static_cast<std::size_t>(ix) * 3 + k] = static_cast<char>(c[k]);
        }
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

namespace detail {

inline std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

inline void write_csv(std::ostream& out, const Raster& r) {
    out << "ix,iy,re,im,class,aux1,aux2\n";
    for (int iy = 0; iy < r.height; ++iy)
        for (int ix = 0; ix < r.width; ++ix) {
            const Cell& c = r.at(ix, iy);
            const Complex z = r.center(ix, iy);
            out << ix << ',' << iy << ',' << detail::fmt_double(z.real()) << ',' << detail::fmt_double(z.imag()) << ','
                << to_string(c.tag) << ',' << c.aux1 << ',' << detail::fmt_double(c.aux2) << '\n';
        }
}

struct Component {
    Tag tag = Tag::Undecided;
    int index = 0; ///< period or capture index for indexed tags, 0 otherwise
    std::size_t size = 0;
    int ix0 = 0, iy0 = 0, ix1 = 0, iy1 = 0; ///< inclusive cell bounding box
    Complex representative{};               ///< center of the first cell in row-major order
    double diameter = 0.0;                  ///< diagonal of the bounding box in plane units
    bool touches_boundary = false;
};

/// 4-connected components of equal class, largest first (ties by first cell).
inline std::vector<Component> component_census(const Raster& r) {
    std::vector<std::int64_t> keys(r.cells.size());
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = r.cells[i].key();
    const Labeling lab = label_components<std::int64_t>(r.width, r.height, keys, -1);
    std::vector<Component> out(static_cast<std::size_t>(lab.count));
    std::vector<bool> seen(out.size(), false);
    for (int iy = 0; iy < r.height; ++iy)
        for (int ix = 0; ix < r.width; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * r.width + ix;
            Component& c = out[static_cast<std::size_t>(lab.labels[i])];
            if (!seen[static_cast<std::size_t>(lab.labels[i])]) {
                seen[static_cast<std::size_t>(lab.labels[i])] = true;
                const Cell& cell = r.cells[i];
                const std::int64_t k = cell.key();
                c.tag = cell.tag;
                c.index = static_cast<int>(k & 0xffffffff);
                c.ix0 = c.ix1 = ix;
                c.iy0 = c.iy1 = iy;
                c.representative = r.center(ix, iy);
            }
            ++c.size;
            c.ix0 = std::min(c.ix0, ix);
            c.ix1 = std::max(c.ix1, ix);
            c.iy0 = std::min(c.iy0, iy);
            c.iy1 = std::max(c.iy1, iy);
        }
    const double dx = r.window.width() / r.width;
    const double dy = r.window.height() / r.height;
    for (Component& c : out) {
        c.touches_boundary = c.ix0 == 0 || c.iy0 == 0 || c.ix1 == r.width - 1 || c.iy1 == r.height - 1;
        c.diameter = std::hypot((c.ix1 - c.ix0 + 1) * dx, (c.iy1 - c.iy0 + 1) * dy);
    }
    std::stable_sort(out.begin(), out.end(), [](const Component& a, const Component& b) { return a.size > b.size; });
    return out;
}

inline std::size_t count_larger_than(const std::vector<Component>& census, double eps) {
    return static_cast<std::size_t>(
        std::count_if(census.begin(), census.end(), [&](const Component& c) { return c.diameter > eps; }));
}

} // namespace tanfam
