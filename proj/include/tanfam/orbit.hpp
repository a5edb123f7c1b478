#pragma once

// Orbit iteration, cycle detection/refinement and pointwise classification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"

namespace tanfam {

/// Numerical infinity for orbits.
inline constexpr double kEscapeRadius = 1e8;
inline constexpr int kDefaultMaxIter = 2000;
inline constexpr int kMaxCyclePeriod = 64;
inline constexpr double kCycleMatchTolerance = 1e-6;

/// Largest radius r <= min(0.1, (0.25/|lambda|)^(1/(pq-1))) with |f(z)| < |z|/2 on
/// 64 samples of |z| = r. Halves the candidate until the check holds.
inline double trap_radius(const Family& f) {
    double r = std::min(0.1, std::pow(0.25 / std::abs(f.lambda()), 1.0 / (f.degree() - 1)));
    for (int attempt = 0; attempt < 60; ++attempt, r *= 0.5) {
        bool ok = true;
        for (int i = 0; i < 64 && ok; ++i) {
            const Complex z = std::polar(r, 2.0 * pi * i / 64.0);
            const Extended w = eval(f, z);
            ok = w.finite() && std::abs(w.value) < 0.5 * r;
        }
        if (ok) return r;
    }
    throw Error(ErrorKind::InvalidConfig, "could not validate a trap disk around the origin");
}

enum class OrbitEnd { TrapEntry, FixedAtZero, AtInfinity, Escaped, MaxIter };

struct OrbitTrace {
    std::vector<Complex> points;
    OrbitEnd end = OrbitEnd::MaxIter;
};

/// orbit[0] = z0, orbit[i+1] = f(orbit[i]). Stops at the pole, past kEscapeRadius,
/// on reaching 0 exactly, on entering |z| < trap (when trap > 0), or after max_iter steps.
inline OrbitTrace iterate_orbit(const Family& f, Complex z0, int max_iter, double trap = 0.0) {
    if (max_iter < 1) throw Error(ErrorKind::InvalidConfig, "max_iter must be >= 1");
    OrbitTrace trace;
    trace.points.push_back(z0);
    Complex z = z0;
    for (int i = 0; i < max_iter; ++i) {
        if (z == Complex{}) { trace.end = OrbitEnd::FixedAtZero; return trace; }
        if (trap > 0.0 && std::abs(z) < trap) { trace.end = OrbitEnd::TrapEntry; return trace; }
        const Extended w = eval(f, z);
        if (w.at_infinity) { trace.end = OrbitEnd::AtInfinity; return trace; }
        z = w.value;
        if (std::abs(z) > kEscapeRadius) { trace.end = OrbitEnd::Escaped; return trace; }
        trace.points.push_back(z);
    }
    trace.end = OrbitEnd::MaxIter;
    return trace;
}

struct CycleInfo {
    int period = 0;
    Complex point{};
    Complex multiplier{};
    double residual = 0.0;
};

namespace detail {

struct CycleStep {
    Complex value;
    Complex derivative; // product of f' along the period
    bool finite;
};

inline CycleStep iterate_with_derivative(const Family& f, Complex z, int period) {
    Complex d{1.0, 0.0};
    for (int i = 0; i < period; ++i) {
        const Extended df = eval_derivative(f, z);
        const Extended w = eval(f, z);
        if (df.at_infinity || w.at_infinity) return {z, d, false};
        d *= df.value;
        z = w.value;
    }
    return {z, d, is_finite(d)};
}

inline bool cycle_residual_ok(double residual, Complex point) {
    return residual < 1e-10 * (1.0 + std::abs(point));
}

} // namespace detail

/// Newton on g(z) = f^period(z) - z from `guess`.
inline CycleInfo refine_cycle(const Family& f, Complex guess, int period) {
    if (period < 1) throw Error(ErrorKind::InvalidConfig, "period must be >= 1");
    Complex z = guess;
    for (int it = 0; it < 50; ++it) {
        const auto step = detail::iterate_with_derivative(f, z, period);
        if (!step.finite) throw Error(ErrorKind::NoConvergence, "cycle refinement hit a pole");
        const Complex g = step.value - z;
        const Complex dg = step.derivative - 1.0;
        if (std::abs(step.derivative) > 1e300 || std::abs(dg) < 1e-300)
            throw Error(ErrorKind::DerivativeSingular, "chain-rule product left the double range");
        const Complex delta = g / dg;
        z -= delta;
        if (std::abs(delta) <= 1e-15 * (1.0 + std::abs(z)) || std::abs(g) <= 1e-15 * (1.0 + std::abs(z))) {
            const auto check = detail::iterate_with_derivative(f, z, period);
            if (!check.finite) throw Error(ErrorKind::NoConvergence, "refined cycle lands on a pole");
            const double residual = std::abs(check.value - z);
            if (!detail::cycle_residual_ok(residual, z)) continue;
            return {period, z, check.derivative, residual};
        }
    }
    throw Error(ErrorKind::NoConvergence, "Newton on f^n(z) - z did not converge in 50 steps");
}

/// Reduces a refined cycle to its minimal period.
inline CycleInfo minimal_cycle(const Family& f, const CycleInfo& cycle) {
    for (int d = 1; d < cycle.period; ++d) {
        if (cycle.period % d != 0) continue;
        const auto step = detail::iterate_with_derivative(f, cycle.point, d);
        if (step.finite && std::abs(step.value - cycle.point) < 1e-8 * (1.0 + std::abs(cycle.point))) {
            try {
                return refine_cycle(f, cycle.point, d);
            } catch (const Error&) {
                return cycle;
            }
        }
    }
    return cycle;
}

/// Smallest period P <= 64 with |z_last - z_{last-P}| < tol, refined by Newton.
inline std::optional<CycleInfo> detect_cycle(const Family& f, const std::vector<Complex>& orbit, double tol) {
    if (orbit.empty()) return std::nullopt;
    const std::size_t last = orbit.size() - 1;
    if (orbit[last] == Complex{}) return CycleInfo{1, Complex{}, Complex{}, 0.0};
    for (int period = 1; period <= kMaxCyclePeriod && static_cast<std::size_t>(period) <= last; ++period) {
        if (std::abs(orbit[last] - orbit[last - period]) >= tol) continue;
        try {
            return minimal_cycle(f, refine_cycle(f, orbit[last], period));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

struct OrbitClass {
    enum class Kind : std::uint8_t { AttractedToZero, AttractedToCycle, NeutralCandidate, PoleEscape, Undecided };

    Kind kind = Kind::Undecided;
    int steps = 0;
    int period = 0;
    Complex multiplier{};
    Complex representative{};

    static OrbitClass zero(int steps) { return {Kind::AttractedToZero, steps, 0, {}, {}}; }
    static OrbitClass escape(int steps) { return {Kind::PoleEscape, steps, 0, {}, {}}; }
    static OrbitClass undecided(int steps) { return {Kind::Undecided, steps, 0, {}, {}}; }
    static OrbitClass cycle(int steps, const CycleInfo& c, bool neutral) {
        return {neutral ? Kind::NeutralCandidate : Kind::AttractedToCycle, steps, c.period, c.multiplier, c.point};
    }
};

struct ClassifyOptions {
    int max_iter = kDefaultMaxIter;
    /// <= 0 selects trap_radius(f).
    double trap_radius = 0.0;
};

/// Escape to the pole / past kEscapeRadius, entry into the trap disk, or Brent cycle
/// detection followed by Newton refinement.
inline OrbitClass classify_point(const Family& f, Complex z0, int max_iter, double trap) {
    Complex z = z0;
    Complex tortoise = z0;
    int power = 1;
    int lam = 0;
    for (int i = 0; i < max_iter; ++i) {
        if (std::abs(z) < trap) return OrbitClass::zero(i);
        const Extended w = eval(f, z);
        if (w.at_infinity) return OrbitClass::escape(i + 1);
        z = w.value;
        if (std::abs(z) > kEscapeRadius) return OrbitClass::escape(i + 1);
        ++lam;
        if (std::abs(z - tortoise) < kCycleMatchTolerance * (1.0 + std::abs(z)) && std::abs(z) >= trap) {
            try {
                const CycleInfo c = minimal_cycle(f, refine_cycle(f, z, lam));
                const double modulus = std::abs(c.multiplier);
                if (modulus < 1.0 - 1e-9) return OrbitClass::cycle(i + 1, c, false);
                if (modulus <= 1.0 + 1e-6) return OrbitClass::cycle(i + 1, c, true);
            } catch (const Error&) {
                // keep iterating; the near-return was not a cycle Newton could certify
            }
        }
        if (lam == power) {
            tortoise = z;
            power = std::min(power * 2, kMaxCyclePeriod);
            lam = 0;
        }
    }
    return std::abs(z) < trap ? OrbitClass::zero(max_iter) : OrbitClass::undecided(max_iter);
}

inline OrbitClass classify_point(const Family& f, Complex z0, const ClassifyOptions& opts = {}) {
    const double trap = opts.trap_radius > 0.0 ? opts.trap_radius : trap_radius(f);
    return classify_point(f, z0, opts.max_iter, trap);
}

} // namespace tanfam
