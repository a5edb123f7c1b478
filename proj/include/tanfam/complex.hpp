#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace tanfam {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

/// A point of the Riemann sphere: a finite complex value or the point at infinity.
struct Extended {
    Complex value{};
    bool at_infinity = false;

    static Extended infinity() { return {Complex{}, true}; }
    bool finite() const { return !at_infinity; }
};

/// i^n for any integer n, exact.
inline Complex i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

inline Complex ipow(Complex z, int n) {
    Complex acc{1.0, 0.0};
    Complex base = z;
    unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
    while (e) {
        if (e & 1u) acc *= base;
        base *= base;
        e >>= 1u;
    }
    return n < 0 ? 1.0 / acc : acc;
}

/// Principal n-th root, arg in (-pi/n, pi/n].
inline Complex principal_root(Complex z, int n) {
    if (z == Complex{}) return {};
    double a = std::arg(z);
    if (a < -pi + 1e-8) a += 2.0 * pi; // the negative axis belongs to the upper side, rounding included
    return std::polar(std::pow(std::abs(z), 1.0 / n), a / n);
}

inline Complex unit(double angle) { return std::polar(1.0, angle); }

/// tan(x+iy) through (sin 2x + i sinh 2y) / (cos 2x + cosh 2y); the limit +-i beyond |y| >= 20.
inline Complex stable_tan(Complex w) {
    const double x = w.real();
    const double y = w.imag();
    if (y >= 20.0) return {0.0, 1.0};
    if (y <= -20.0) return {0.0, -1.0};
    const double den = std::cos(2.0 * x) + std::cosh(2.0 * y);
    return {std::sin(2.0 * x) / den, std::sinh(2.0 * y) / den};
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Forward-mode derivative carrier for holomorphic maps of one complex variable.
struct Jet {
    Complex v{};
    Complex d{};

    Jet() = default;
    Jet(Complex value, Complex deriv = {}) : v(value), d(deriv) {}
    Jet(double value) : v(value), d() {}

    static Jet variable(Complex value) { return {value, Complex{1.0, 0.0}}; }

    Jet& operator+=(const Jet& o) { v += o.v; d += o.d; return *this; }
    Jet& operator-=(const Jet& o) { v -= o.v; d -= o.d; return *this; }
    Jet& operator*=(const Jet& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Jet& operator/=(const Jet& o) {
        d = (d * o.v - v * o.d) / (o.v * o.v);
        v /= o.v;
        return *this;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
    friend Jet operator-(const Jet& a) { return {-a.v, -a.d}; }
};

inline Complex value_of(Complex z) { return z; }
inline Complex value_of(const Jet& z) { return z.v; }

inline Jet ipow(const Jet& z, int n) {
    if (n == 0) return Jet{Complex{1.0, 0.0}};
    const Complex lower = ipow(z.v, n - 1);
    return {lower * z.v, static_cast<double>(n) * lower * z.d};
}

inline Jet stable_tan(const Jet& w) {
    const Complex t = stable_tan(w.v);
    return {t, w.d * (1.0 + t * t)};
}

inline Jet log(const Jet& z) { return {std::log(z.v), z.d / z.v}; }
inline Jet exp(const Jet& z) {
    const Complex e = std::exp(z.v);
    return {e, e * z.d};
}

/// z^(1/n) using a caller-chosen value of the root; derivative follows from r^n = z.
inline Jet root_with_value(const Jet& z, Complex root, int n) {
    return {root, root * z.d / (static_cast<double>(n) * z.v)};
}

inline Jet principal_root(const Jet& z, int n) {
    return root_with_value(z, principal_root(z.v, n), n);
}

} // namespace tanfam
