#pragma once

// Evaluation of f(z) = lambda * tan^p(z^q): the map, its derivative, the
// singular-value geometry and the closed-form inverse branches.

#include <cmath>
#include <cstdint>
#include <vector>

#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"

namespace tanfam {

/// Pole-proximity tolerance relative to |z^q|.
inline constexpr double kPoleTolerance = 1e-14;
/// Beyond this modulus a finite value is treated as the pole it approximates.
inline constexpr double kOverflowModulus = 1e300;

class Family {
public:
    static Family make(Complex lambda, int p, int q) {
        if (p < 1 || q < 1) throw Error(ErrorKind::InvalidConfig, "p and q must be positive");
        if (p * q <= 1) throw Error(ErrorKind::InvalidConfig, "the family requires pq > 1");
        if (!is_finite(lambda) || lambda == Complex{})
            throw Error(ErrorKind::InvalidConfig, "lambda must be finite and non-zero");
        return Family(lambda, p, q);
    }

    Complex lambda() const { return lambda_; }
    int p() const { return p_; }
    int q() const { return q_; }
    /// Local degree at the superattracting origin.
    int degree() const { return p_ * q_; }
    /// Principal (pq-1)-th root of lambda; sigma(z) = mu z conjugates f to a monic map.
    Complex mu() const { return mu_; }

    Family with_lambda(Complex lambda) const { return make(lambda, p_, q_); }

private:
    Family(Complex lambda, int p, int q)
        : lambda_(lambda), p_(p), q_(q), mu_(principal_root(lambda, p * q - 1)) {}

    Complex lambda_;
    int p_;
    int q_;
    Complex mu_;
};

struct BranchIndex {
    std::int64_t k = 0; ///< arctan translate: z^q = arctan(u) + k pi
    int j = 0;          ///< q-th root sheet, 0 <= j < q
    int l = 0;          ///< p-th root sheet of (w/lambda)^(1/p), 0 <= l < p

    friend bool operator==(const BranchIndex&, const BranchIndex&) = default;
};

/// omega_j = e^{i pi j / q} and xi_j = e^{i pi (2j+1) / (2q)}, j = 0..2q-1.
struct SectorRoots {
    std::vector<Complex> omega;
    std::vector<Complex> xi;

    static SectorRoots make(int q) {
        SectorRoots roots;
        for (int j = 0; j < 2 * q; ++j) {
            roots.omega.push_back(omega_of(q, j));
            roots.xi.push_back(xi_of(q, j));
        }
        return roots;
    }

    static Complex omega_of(int q, int j) { return unit(pi * j / q); }
    static Complex xi_of(int q, int j) { return unit(pi * (2 * j + 1) / (2.0 * q)); }
};

namespace detail {

// True when w lies within the pole tolerance of k pi + pi/2 for the nearest k.
inline bool near_tan_pole(Complex w) {
    const double k = std::round((w.real() - pi / 2) / pi);
    const Complex pole{k * pi + pi / 2, 0.0};
    return std::abs(w - pole) < kPoleTolerance * std::max(1.0, std::abs(w));
}

} // namespace detail

/// lambda * tan^p(z^q) on any scalar carrying a value (Complex or Jet).
/// No pole handling; callers on the plain path use eval().
template <class S, class L>
S apply_map(const L& lambda, int p, int q, const S& z) {
    return lambda * ipow(stable_tan(ipow(z, q)), p);
}

inline Extended eval(const Family& f, Complex z) {
    const Complex w = ipow(z, f.q());
    if (std::abs(w.imag()) >= 20.0) return {f.lambda() * i_pow(w.imag() > 0 ? f.p() : -f.p()), false};
    if (detail::near_tan_pole(w)) return Extended::infinity();
    const Complex t = stable_tan(w);
    const Complex out = f.lambda() * ipow(t, f.p());
    if (!is_finite(out) || std::abs(out) > kOverflowModulus) return Extended::infinity();
    return {out, false};
}

/// f'(z) = pq lambda z^(q-1) tan^(p-1)(z^q) sec^2(z^q); at-infinity on a pole.
inline Extended eval_derivative(const Family& f, Complex z) {
    const Complex w = ipow(z, f.q());
    if (detail::near_tan_pole(w)) return Extended::infinity();
    const Complex t = stable_tan(w);
    const Complex sec2 = std::abs(w.imag()) >= 20.0 ? Complex{} : 1.0 + t * t;
    const Complex out = static_cast<double>(f.degree()) * f.lambda() * ipow(z, f.q() - 1) *
                        ipow(t, f.p() - 1) * sec2;
    if (!is_finite(out) || std::abs(out) > kOverflowModulus) return Extended::infinity();
    return {out, false};
}

struct AsymptoticValues {
    Complex v;
    Complex v_prime;
};

inline AsymptoticValues asymptotic_values(const Family& f) {
    return {i_pow(f.p()) * f.lambda(), i_pow(-f.p()) * f.lambda()};
}

/// (k pi + pi/2)^(1/q) omega_j, k >= 0, 0 <= j < 2q.
inline Complex pole(const Family& f, std::int64_t k, int j) {
    return std::pow(static_cast<double>(k) * pi + pi / 2, 1.0 / f.q()) * SectorRoots::omega_of(f.q(), j);
}

/// (k pi)^(1/q) omega_j; the origin for k = 0.
inline Complex zero(const Family& f, std::int64_t k, int j) {
    if (k == 0) return {};
    return std::pow(static_cast<double>(k) * pi, 1.0 / f.q()) * SectorRoots::omega_of(f.q(), j);
}

/// The pole reached by the branch (k, j, .) as u -> infinity: principal root of
/// k pi + pi/2 rotated to sheet j. For k >= 0 this is pole(k, 2j); for k < 0 it is
/// pole(-k-1, 2j+1).
inline Complex branch_pole(int q, std::int64_t k, int j) {
    const Complex s{static_cast<double>(k) * pi + pi / 2, 0.0};
    return principal_root(s, q) * unit(2.0 * pi * j / q);
}

/// lambda' with f_{lambda'} conformally conjugate to lambda tanh^p(z^q):
/// c z conjugates them for c = xi_0, giving lambda' = xi_0 (-i)^p lambda.
inline Complex lambda_from_tanh(Complex lambda, int p, int q) {
    return SectorRoots::xi_of(q, 0) * i_pow(-p) * lambda;
}

namespace detail {

/// Principal arctan with the cut pieces {iy : |y| > 1} assigned to the right half plane,
/// rounding included.
inline Complex canonical_atan(Complex u) {
    Complex a = std::atan(u);
    if (std::abs(u.imag()) > 1.0 && std::abs(u.real()) < 1e-6 * std::abs(u) && a.real() < 0.0) a += pi;
    return a;
}

} // namespace detail

inline Complex inverse_branch(const Family& f, Complex w, const BranchIndex& b) {
    if (b.j < 0 || b.j >= f.q() || b.l < 0 || b.l >= f.p())
        throw Error(ErrorKind::InvalidConfig, "branch index out of range");
    const auto [v, vp] = asymptotic_values(f);
    const double scale = std::abs(f.lambda());
    if (std::abs(w) < 1e-300 || std::abs(w - v) < 1e-13 * scale || std::abs(w - vp) < 1e-13 * scale)
        throw Error(ErrorKind::SingularValue, "no regular inverse branch at a singular value");
    const Complex u = principal_root(w / f.lambda(), f.p()) * unit(2.0 * pi * b.l / f.p());
    if (std::abs(u - I) < 1e-13 || std::abs(u + I) < 1e-13)
        throw Error(ErrorKind::BranchUndefined, "arctan is undefined at +-i");
    const Complex s = detail::canonical_atan(u) + static_cast<double>(b.k) * pi;
    return principal_root(s, f.q()) * unit(2.0 * pi * b.j / f.q());
}

enum class Relation { Equal, Negated };

struct SymmetryImage {
    Complex z;
    Relation relation;
};

/// omega_j z with the predicted relation between f(omega_j z) and f(z).
inline SymmetryImage symmetry_image(const Family& f, Complex z, int j) {
    const bool negated = (f.p() % 2 == 1) && (((j % 2) + 2) % 2 == 1);
    return {SectorRoots::omega_of(f.q(), j) * z, negated ? Relation::Negated : Relation::Equal};
}

} // namespace tanfam
