#pragma once

#include <cstdint>

#include "tanfam/basin.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"

namespace tanfam {

/// How the capture index n of a capture parameter is determined.
enum class CaptureMode : std::uint8_t {
    Fast,   ///< first trap-entry time of the asymptotic orbit (an upper bound for n)
    Exact,  ///< pointwise B0 membership by path lifting
    Raster, ///< B0 as the origin's component of a rendered attracted-to-zero set
};

struct ParamClass {
    enum class Kind : std::uint8_t { Capture, Shell, Undecided };

    Kind kind = Kind::Undecided;
    int n = 0;             ///< capture index
    bool upper_bound = false; ///< n is only an upper bound (fast mode)
    int period = 0;
    Complex multiplier{};

    static ParamClass capture(int n, bool upper_bound = false) { return {Kind::Capture, n, upper_bound, 0, {}}; }
    static ParamClass shell(int period, Complex multiplier) { return {Kind::Shell, 0, false, period, multiplier}; }
    static ParamClass undecided() { return {}; }

    friend bool operator==(const ParamClass& a, const ParamClass& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Capture) return a.n == b.n;
        if (a.kind == Kind::Shell) return a.period == b.period;
        return true;
    }
};

struct ParamOptions {
    int max_iter = kDefaultMaxIter;
    CaptureMode mode = CaptureMode::Exact;
    int raster_resolution = 2048;
};

/// Classification of lambda by the fate of its asymptotic value. For odd p the
/// second asymptotic value v' = -v has the mirrored orbit (f is odd or even), so
/// both are captured together or neither is; v' is checked for agreement.
inline ParamClass classify_parameter(const Family& f, const ParamOptions& opts = {}) {
    const double trap = trap_radius(f);
    const auto [v, vp] = asymptotic_values(f);
    const OrbitClass cls = classify_point(f, v, opts.max_iter, trap);
    if (f.p() % 2 == 1) {
        const OrbitClass other = classify_point(f, vp, opts.max_iter, trap);
        if (other.kind != cls.kind) return ParamClass::undecided();
    }
    switch (cls.kind) {
    case OrbitClass::Kind::AttractedToCycle:
        return ParamClass::shell(cls.period, cls.multiplier);
    case OrbitClass::Kind::AttractedToZero: {
        if (opts.mode == CaptureMode::Fast) return ParamClass::capture(cls.steps, true);
        const auto n = opts.mode == CaptureMode::Exact ? capture_index_exact(f, v, opts.max_iter)
                                                       : capture_index_raster(f, v, opts.raster_resolution, opts.max_iter);
        return n ? ParamClass::capture(*n) : ParamClass::undecided();
    }
    default:
        return ParamClass::undecided();
    }
}

} // namespace tanfam
