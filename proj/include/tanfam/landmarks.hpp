#pragma once

// Distinguished parameters: centers, Misiurewicz points, the parabolic threshold of
// t tanh^p(x^q), virtual-cycle parameters; and the conjugacy symmetries along the
// omega_j and xi_j rays.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"

namespace tanfam {

struct Certificate {
    double residual = 0.0; ///< defining-equation residual
    std::optional<Complex> multiplier;
    std::optional<Complex> point; ///< the distinguished point of the dynamics, when there is one
};

struct Landmark {
    enum class Kind : std::uint8_t { Center, Misiurewicz, Parabolic, VirtualCycle };
    Kind kind = Kind::Center;
    Complex lambda{};
    int order = 0;
    Certificate certificate;
};

inline const char* to_string(Landmark::Kind k) {
    switch (k) {
    case Landmark::Kind::Center: return "center";
    case Landmark::Kind::Misiurewicz: return "misiurewicz";
    case Landmark::Kind::Parabolic: return "parabolic";
    case Landmark::Kind::VirtualCycle: return "virtual";
    }
    return "?";
}

namespace detail {

// f^n_lambda(v_lambda) as a jet in lambda; nullopt on a pole.
inline std::optional<Jet> asymptotic_iterate(Complex lambda, int p, int q, int n) {
    const Jet lam = Jet::variable(lambda);
    Jet z = Jet{i_pow(p)} * lam;
    for (int k = 0; k < n; ++k) {
        const Jet x = ipow(z, q);
        if (near_tan_pole(x.v)) return std::nullopt;
        z = lam * ipow(stable_tan(x), p);
    }
    return z;
}

template <class Residual>
Complex newton_in_lambda(Residual&& residual, Complex seed, double tol, const char* what) {
    Complex lambda = seed;
    for (int it = 0; it < 100; ++it) {
        const std::optional<Jet> r = residual(lambda);
        if (!r || !is_finite(r->v) || !is_finite(r->d)) throw Error(ErrorKind::NoConvergence, what);
        if (std::abs(r->v) < tol) return lambda;
        if (std::abs(r->d) < 1e-300) throw Error(ErrorKind::DerivativeSingular, what);
        Complex step = r->v / r->d;
        // damping keeps the iterate away from 0, where the family degenerates
        const double cap = 0.5 * std::max(std::abs(lambda), 1e-3);
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        lambda -= step;
        if (lambda == Complex{}) throw Error(ErrorKind::NoConvergence, what);
    }
    throw Error(ErrorKind::NoConvergence, what);
}

} // namespace detail

/// Parameter with f^n(v) = 0 and f^k(v) != 0 for k < n. Newton runs on
/// tan(f^(n-1)(v)^q), which has a simple zero where f^n(v) has a zero of order p.
inline Landmark find_center(int p, int q, int n, Complex seed) {
    if (n < 1) throw Error(ErrorKind::InvalidConfig, "center order must be >= 1");
    Family::make(seed == Complex{} ? Complex{1.0, 0.0} : seed, p, q);
    auto h = [&](Complex lambda) -> std::optional<Jet> {
        auto w = detail::asymptotic_iterate(lambda, p, q, n - 1);
        if (!w) return std::nullopt;
        const Jet x = ipow(*w, q);
        if (detail::near_tan_pole(x.v)) return std::nullopt;
        return stable_tan(x);
    };
    const Complex lambda = detail::newton_in_lambda(h, seed, 1e-15, "center Newton did not converge");
    const auto g = detail::asymptotic_iterate(lambda, p, q, n);
    const double residual = g ? std::abs(g->v) : std::numeric_limits<double>::infinity();
    if (!(residual < 1e-9 * (1.0 + std::abs(lambda))))
        throw Error(ErrorKind::NoConvergence, "center residual above 1e-9");
    for (int k = 0; k < n; ++k) {
        const auto z = detail::asymptotic_iterate(lambda, p, q, k);
        if (z && std::abs(z->v) < 1e-6 * (1.0 + std::abs(lambda)))
            throw Error(ErrorKind::WrongOrder, "a lower iterate of the asymptotic value vanishes");
    }
    return {Landmark::Kind::Center, lambda, n, {residual, std::nullopt, Complex{}}};
}

/// t* = (pi/4)^(1/q).
inline double t_star(int q) { return std::pow(pi / 4, 1.0 / q); }

/// lambda = t*: an iterate of the asymptotic value lands on the repelling fixed point
/// t*, with multiplier pq pi / 2. For odd p, f(v) = -t* and f^2(v) = t*.
inline Landmark misiurewicz_t_star(int p, int q) {
    if ((p * q) % 2 != 0) throw Error(ErrorKind::ParityUnsupported, "Misiurewicz t* requires pq even");
    const double ts = t_star(q);
    const Family f = Family::make(ts, p, q);
    Complex z = asymptotic_values(f).v;
    double residual = std::numeric_limits<double>::infinity();
    int order = 0;
    for (int k = 1; k <= 2; ++k) {
        z = eval(f, z).value;
        residual = std::abs(z - ts);
        if (residual < 1e-12) {
            order = k;
            break;
        }
    }
    const Complex multiplier = eval_derivative(f, ts).value;
    return {Landmark::Kind::Misiurewicz, ts, order, {residual, multiplier, Complex{ts, 0.0}}};
}

/// |f_{t*}(t*) - t*|.
inline double misiurewicz_fixed_residual(int p, int q) {
    const double ts = t_star(q);
    return std::abs(eval(Family::make(ts, p, q), ts).value - ts);
}

// ---------------------------------------------------------------------------
// Real family g_t(x) = t tanh^p(x^q), x >= 0

struct RealTanh {
    int p;
    int q;

    /// tanh^p(x^q) and its first two x-derivatives.
    struct Jet2 {
        double h, h1, h2;
    };

    Jet2 shape(double x) const {
        const double u = std::pow(x, q);
        const double du = q * std::pow(x, q - 1);
        const double ddu = q > 1 ? q * (q - 1) * std::pow(x, q - 2) : 0.0;
        const double t = std::tanh(u);
        const double s = 1.0 - t * t;
        const double tp1 = std::pow(t, p - 1);
        const double tp2 = p >= 2 ? std::pow(t, p - 2) : 0.0;
        const double h = tp1 * t;
        const double h1 = p * tp1 * s * du;
        const double h2 = p * (p - 1) * tp2 * s * s * du * du - 2.0 * p * tp1 * t * s * du * du + p * tp1 * s * ddu;
        return {h, h1, h2};
    }

    double g(double t, double x) const { return t * shape(x).h; }
    double dg(double t, double x) const { return t * shape(x).h1; }
};

struct ParabolicResult {
    double t0 = 0.0;
    double x0 = 0.0;
    Landmark landmark;
    bool below_attracted = false; ///< t0 - delta: the orbit of the asymptotic value t enters the trap
    bool above_attracting = false; ///< t0 + delta: a positive attracting fixed point exists
    double above_multiplier = 0.0;
};

namespace detail {

inline bool real_orbit_trapped(const RealTanh& g, double t, int max_iter) {
    const double trap = std::min(0.1, std::pow(0.25 / t, 1.0 / (g.p * g.q - 1)));
    double x = t; // asymptotic value of g_t on x > 0
    for (int i = 0; i < max_iter; ++i) {
        if (x < trap) return true;
        x = g.g(t, x);
    }
    return x < trap;
}

inline std::optional<double> real_attracting_fixed(const RealTanh& g, double t, int max_iter, double& multiplier) {
    double x = t;
    for (int i = 0; i < max_iter; ++i) {
        const double next = g.g(t, x);
        if (std::abs(next - x) < 1e-14 * (1.0 + x)) {
            multiplier = g.dg(t, next);
            return next > 1e-3 && multiplier < 1.0 ? std::optional<double>(next) : std::nullopt;
        }
        x = next;
    }
    return std::nullopt;
}

} // namespace detail

/// Parabolic threshold of g_t: g_t(x0) = x0 and g_t'(x0) = 1, by damped Newton on the
/// 2x2 real system from the first t of a coarse sweep where a positive fixed point exists.
inline ParabolicResult find_parabolic_t0(int p, int q, double delta = 1e-3) {
    Family::make(1.0, p, q);
    const RealTanh g{p, q};
    // coarse sweep: min over x of g_t(x) - x crosses 0 at t0
    auto gap = [&](double t, double& arg) {
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 4000; ++i) {
            const double x = 4.0 * i / 4000.0;
            const double d = g.g(t, x) - x;
            if (d > best) {
                best = d;
                arg = x;
            }
        }
        return best;
    };
    double t = 0.25;
    double x = 0.0;
    for (; t < 50.0; t += 0.01)
        if (gap(t, x) >= 0.0) break;
    if (t >= 50.0) throw Error(ErrorKind::NoConvergence, "no positive fixed point below t = 50");
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const auto s = g.shape(x);
        const double f1 = t * s.h - x;
        const double f2 = t * s.h1 - 1.0;
        if (std::abs(f1) < 1e-15 && std::abs(f2) < 1e-13) {
            converged = true;
            break;
        }
        const double a = s.h, b = t * s.h1 - 1.0, c = s.h1, d = t * s.h2;
        const double det = a * d - b * c;
        if (std::abs(det) < 1e-300) break;
        double dt = (f1 * d - b * f2) / det;
        double dx = (a * f2 - c * f1) / det;
        double damp = 1.0;
        while ((t - damp * dt <= 0.0 || x - damp * dx <= 0.0) && damp > 1e-6) damp *= 0.5;
        t -= damp * dt;
        x -= damp * dx;
    }
    if (!converged) throw Error(ErrorKind::NoConvergence, "parabolic Newton did not converge");
    ParabolicResult out;
    out.t0 = t;
    out.x0 = x;
    const double residual = std::abs(g.g(t, x) - x);
    out.landmark = {Landmark::Kind::Parabolic, t, 1, {residual, Complex{g.dg(t, x), 0.0}, Complex{x, 0.0}}};
    out.below_attracted = detail::real_orbit_trapped(g, t - delta, 200000);
    out.above_attracting = detail::real_attracting_fixed(g, t + delta, 200000, out.above_multiplier).has_value();
    return out;
}

/// Parameter whose asymptotic value is a prepole of order n: f^(n-2)(v) = pole(k, j).
inline Landmark find_virtual_cycle_param(int p, int q, int n, std::int64_t k, int j, Complex seed = {}) {
    if (n < 2) throw Error(ErrorKind::InvalidConfig, "virtual cycles need n >= 2");
    const Family probe = Family::make(1.0, p, q);
    const Complex target = pole(probe, k, j);
    Complex lambda;
    if (n == 2) {
        lambda = target / i_pow(p);
    } else {
        auto r = [&](Complex l) -> std::optional<Jet> {
            auto z = detail::asymptotic_iterate(l, p, q, n - 2);
            if (!z) return std::nullopt;
            return *z - Jet{target};
        };
        lambda = detail::newton_in_lambda(r, seed, 1e-13 * (1.0 + std::abs(target)), "virtual-cycle Newton did not converge");
    }
    const auto w = detail::asymptotic_iterate(lambda, p, q, n - 2);
    double reciprocal = 0.0;
    if (w) {
        const Extended last = eval(Family::make(lambda, p, q), w->v);
        reciprocal = last.at_infinity ? 0.0 : 1.0 / std::abs(last.value);
    }
    return {Landmark::Kind::VirtualCycle, lambda, n, {reciprocal, std::nullopt, w ? std::optional<Complex>(w->v) : std::nullopt}};
}

// ---------------------------------------------------------------------------
// Symmetries

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t count = 0;
    bool passed() const { return max_residual < tolerance; }
};

struct SymmetryReport {
    std::vector<CheckResult> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed()) return false;
        return true;
    }
    double max_residual() const {
        double m = 0.0;
        for (const auto& c : checks) m = std::max(m, c.max_residual);
        return m;
    }
};

/// g_t(z) = t tanh^p(z^q), with tanh(w) = -i tan(i w).
inline Complex tanh_map(double t, int p, int q, Complex z) {
    return t * ipow(-I * stable_tan(I * ipow(z, q)), p);
}

namespace detail {

inline double relative_gap(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Keeps samples away from poles of tan and tanh so residuals measure the identity.
inline bool clear_of_poles(Complex z, int q) {
    const Complex w = ipow(z, q);
    for (const Complex s : {w, I * w}) {
        const double k = std::round((s.real() - pi / 2) / pi);
        if (std::abs(s - Complex{k * pi + pi / 2, 0.0}) < 0.05) return false;
    }
    return true;
}

} // namespace detail

inline constexpr double kSymmetryTolerance = 1e-12;

/// Checks the conjugacies along omega_j t and xi_j t and the real/imaginary line
/// invariance on `samples` random points with |z| <= 2.
inline SymmetryReport verify_symmetries(int p, int q, double t, int samples, std::uint64_t seed = 0) {
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidConfig, "t must be positive");
    Family::make(t, p, q);
    const int m = p * q;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::vector<Complex> zs;
    while (static_cast<int>(zs.size()) < samples) {
        const Complex z{unif(rng), unif(rng)};
        if (std::abs(z) <= 2.0 && detail::clear_of_poles(z, q)) zs.push_back(z);
    }
    std::vector<double> xs;
    for (const Complex& z : zs)
        if (detail::clear_of_poles(Complex{z.real(), 0.0}, q) && detail::clear_of_poles(Complex{0.0, z.real()}, q))
            xs.push_back(z.real());

    SymmetryReport report;
    auto run = [&](std::string name, auto&& residual, std::size_t n) {
        CheckResult c{std::move(name), 0.0, kSymmetryTolerance, n};
        for (std::size_t i = 0; i < n; ++i) c.max_residual = std::max(c.max_residual, residual(i));
        report.checks.push_back(std::move(c));
    };
    const Family ft = Family::make(t, p, q);

    for (int j = 0; j < 2 * q; ++j) {
        const Complex omega = SectorRoots::omega_of(q, j);
        const Family f = Family::make(t * omega, p, q);
        if (m % 2 == 0) {
            const Complex c = omega * ((j * p) % 2 == 0 ? 1.0 : -1.0);
            run("conj1 j=" + std::to_string(j), [&](std::size_t i) {
                return detail::relative_gap(eval(f, c * zs[i]).value, c * eval(ft, zs[i]).value);
            }, zs.size());
        } else {
            const Complex c = i_pow(p) * omega;
            const double eps = (i_pow(m - 1).real()) * (j % 2 == 0 ? 1.0 : -1.0);
            run("conj1 j=" + std::to_string(j), [&](std::size_t i) {
                return detail::relative_gap(eval(f, c * zs[i]).value, c * tanh_map(eps * t, p, q, zs[i]));
            }, zs.size());
        }
    }
    if (m % 2 == 0) {
        for (int j = 0; j < 2 * q; ++j) {
            const Complex xi = SectorRoots::xi_of(q, j);
            const Family f = Family::make(t * xi, p, q);
            const double sigma = (j % 2 == 0 ? 1.0 : -1.0) * i_pow(m).real();
            const Complex c = xi * ipow(sigma * I, p);
            run("conj2 j=" + std::to_string(j), [&](std::size_t i) {
                return detail::relative_gap(eval(f, c * zs[i]).value, c * tanh_map(t, p, q, zs[i]));
            }, zs.size());
        }
    }
    if (p == 3 && q == 2) {
        const Complex xi0 = SectorRoots::xi_of(q, 0);
        const Complex eta = i_pow(3) * xi0;
        const Family f = Family::make(xi0 * t, p, q);
        run("example xi0 p=3 q=2", [&](std::size_t i) {
            return detail::relative_gap(eval(f, -eta * zs[i]).value, -eta * tanh_map(t, p, q, zs[i]));
        }, zs.size());
    }
    // line invariance: f_{omega_j t} maps omega_j R into itself; f_t(omega_j x) is real for j even
    for (int j = 0; j < 2 * q; ++j) {
        const Complex omega = SectorRoots::omega_of(q, j);
        const Family f = Family::make(t * omega, p, q);
        run("syminv line j=" + std::to_string(j), [&](std::size_t i) {
            const Complex w = eval(f, omega * xs[i]).value / omega;
            return std::abs(w.imag()) / std::max(1.0, std::abs(w));
        }, xs.size());
        if (j % 2 == 0) {
            run("syminv real j=" + std::to_string(j), [&](std::size_t i) {
                const Complex w = eval(ft, omega * xs[i]).value;
                return std::abs(w.imag()) / std::max(1.0, std::abs(w));
            }, xs.size());
        }
    }
    // imaginary axis: invariant when pq is odd, mapped into R otherwise
    run("syminv imaginary axis", [&](std::size_t i) {
        const Complex w = eval(ft, Complex{0.0, xs[i]}).value;
        const double off = m % 2 == 1 ? w.real() : w.imag();
        return std::abs(off) / std::max(1.0, std::abs(w));
    }, xs.size());
    // parity table: f(omega_j z) = +-f(z)
    for (int j = 0; j < 2 * q; ++j) {
        run("parity j=" + std::to_string(j), [&](std::size_t i) {
            const SymmetryImage img = symmetry_image(ft, zs[i], j);
            const Complex fz = eval(ft, zs[i]).value;
            return detail::relative_gap(eval(ft, img.z).value, img.relation == Relation::Equal ? fz : -fz);
        }, zs.size());
    }
    return report;
}

} // namespace tanfam
