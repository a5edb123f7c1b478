#pragma once

// Boettcher coordinate at the superattracting origin.
//
// With mu^(pq-1) = lambda, sigma(z) = mu z conjugates f to the monic map
// h(w) = mu^pq tan^p((w/mu)^q), and phi_f = phi_h o sigma. Writing z_n = f^n(z),
//
//   phi_f(z) = mu z exp( sum_n p/m^(n+1) log F_n ),   F_n = tan(z_n^q) / z_n^q,  m = pq.
//
// Near 0 every F_n is close to 1 and principal logarithms are correct. Farther out
// the branch of each log F_n is carried by continuity: along a path in B0 for a
// single point, along the previous ray point during continuation.

#include <cmath>
#include <optional>
#include <vector>

#include "tanfam/basin.hpp"
#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"
#include "tanfam/parameter.hpp"

namespace tanfam {

/// Product terms kept after the orbit enters the trap disk.
inline constexpr int kProductTerms = 60;

/// h(w) = mu^pq tan^p((w/mu)^q), the monic conjugate of f by sigma(z) = mu z.
class MonicConjugate {
public:
    explicit MonicConjugate(const Family& f) : f_(f), mu_(f.mu()) {}

    Extended operator()(Complex w) const {
        const Complex x = ipow(w / mu_, f_.q());
        if (std::abs(x.imag()) >= 20.0) return {ipow(mu_, f_.degree()) * i_pow(x.imag() > 0 ? f_.p() : -f_.p()), false};
        if (detail::near_tan_pole(x)) return Extended::infinity();
        return {ipow(mu_, f_.degree()) * ipow(stable_tan(x), f_.p()), false};
    }

    Complex mu() const { return mu_; }
    /// sigma(z) = mu z
    Complex conjugate(Complex z) const { return mu_ * z; }

private:
    Family f_;
    Complex mu_;
};

inline MonicConjugate monic_conjugate(const Family& f) { return MonicConjugate(f); }

/// Value and z-derivative of phi, with the branch of every log F_n that was used.
struct BoettcherPoint {
    Complex value{};
    Complex derivative{};
    std::vector<Complex> logs;
};

namespace detail {

// log(tan x / x) with the series x^2/3 + 7x^4/90 + 62x^6/2835 near 0.
inline Jet log_tan_ratio(const Jet& x) {
    if (std::abs(x.v) < 1e-3) {
        const Jet x2 = x * x;
        return x2 * (Jet(1.0 / 3.0) + x2 * (Jet(7.0 / 90.0) + x2 * Jet(62.0 / 2835.0)));
    }
    return log(stable_tan(x) / x);
}

struct ProductInput {
    Jet lambda;
    Jet mu;
    Jet z0;
    int p = 1;
    int q = 2;
    double trap = 0.1;
    int max_iter = kDefaultMaxIter;
};

// mu z0 exp(sum w_n log F_n) along the orbit of z0. Each log is put on the branch
// nearest to ref[n] when a reference is given; a jump of more than pi/2 from the
// reference fails (the caller shortens its step).
inline std::optional<BoettcherPoint> evaluate_product(const ProductInput& in, const std::vector<Complex>* ref) {
    const int m = in.p * in.q;
    Jet z = in.z0;
    Complex sum_v{};
    Complex sum_d{};
    double weight = static_cast<double>(in.p) / m;
    int trapped_at = -1;
    BoettcherPoint out;
    for (int n = 0;; ++n) {
        if (z.v == Complex{}) break;
        if (trapped_at < 0 && std::abs(z.v) < in.trap) trapped_at = n;
        if (trapped_at >= 0 && n - trapped_at >= kProductTerms) break;
        if (trapped_at < 0 && n >= in.max_iter) return std::nullopt;
        if (std::abs(z.v) > kEscapeRadius) return std::nullopt;
        const Jet x = ipow(z, in.q);
        if (near_tan_pole(x.v)) return std::nullopt;
        Jet lg = log_tan_ratio(x);
        if (ref && static_cast<std::size_t>(n) < ref->size()) {
            const Complex r = (*ref)[static_cast<std::size_t>(n)];
            const double turns = std::round((r.imag() - lg.v.imag()) / (2.0 * pi));
            lg.v += Complex{0.0, 2.0 * pi * turns};
            if (std::abs(lg.v.imag() - r.imag()) > pi / 2) return std::nullopt;
        }
        out.logs.push_back(lg.v);
        sum_v += weight * lg.v;
        sum_d += weight * lg.d;
        weight /= m;
        if (trapped_at >= 0 && std::abs(lg.v) < 1e-16) break;
        z = in.lambda * ipow(stable_tan(x), in.p);
    }
    const Jet phi = in.mu * in.z0 * exp(Jet{sum_v, sum_d});
    if (!is_finite(phi.v)) return std::nullopt;
    out.value = phi.v;
    out.derivative = phi.d;
    return out;
}

inline ProductInput dynamic_input(const Family& f, double trap, Complex z) {
    return {Jet{f.lambda()}, Jet{f.mu()}, Jet::variable(z), f.p(), f.q(), trap, kDefaultMaxIter};
}

inline constexpr int kMaxContinuationSplits = 20;

} // namespace detail

struct BoettcherContext {
    Family family;
    Complex mu;
    double trap_radius = 0.0;
    int product_terms = kProductTerms;
    /// max over |z| = trap of |F_0^(p/m) - 1| / |z|^(pq-1), measured at construction
    double decay_constant = 0.0;
    /// phi is univalent on |phi| < domain_radius: 1, or |phi(v)|^(1/pq) when v is in B0
    double domain_radius = 1.0;

    static BoettcherContext make(const Family& f);
};

/// phi at a point of the trap disk, where principal logarithms are correct.
inline BoettcherPoint boettcher_point_local(const BoettcherContext& ctx, Complex z) {
    auto out = detail::evaluate_product(detail::dynamic_input(ctx.family, ctx.trap_radius, z), nullptr);
    if (!out) throw Error(ErrorKind::OutsideDomain, "product did not converge inside the trap disk");
    return *out;
}

/// phi at z given phi (with its branches) at a nearby point; nullopt when the
/// branches cannot be followed along the straight segment.
inline std::optional<BoettcherPoint> boettcher_coord_near(const BoettcherContext& ctx, Complex z,
                                                          const BoettcherPoint& ref) {
    return detail::evaluate_product(detail::dynamic_input(ctx.family, ctx.trap_radius, z), &ref.logs);
}

namespace detail {

inline std::optional<BoettcherPoint> continue_segment(const BoettcherContext& ctx, Complex a, Complex b,
                                                      const BoettcherPoint& at_a, int depth) {
    if (auto direct = boettcher_coord_near(ctx, b, at_a)) return direct;
    if (depth >= kMaxContinuationSplits) return std::nullopt;
    const Complex mid = 0.5 * (a + b);
    auto at_mid = continue_segment(ctx, a, mid, at_a, depth + 1);
    if (!at_mid) return std::nullopt;
    return continue_segment(ctx, mid, b, *at_mid, depth + 1);
}

// phi along a polyline ending near 0, carried from the last vertex to the first.
inline BoettcherPoint continue_along(const BoettcherContext& ctx, const std::vector<Complex>& path) {
    BoettcherPoint cur = boettcher_point_local(ctx, path.back());
    for (std::size_t i = path.size() - 1; i-- > 0;) {
        auto next = continue_segment(ctx, path[i + 1], path[i], cur, 0);
        if (!next) throw Error(ErrorKind::OutsideDomain, "lost the logarithm branches along the basin path");
        cur = std::move(*next);
    }
    return cur;
}

// phi continued along a path in B0 from 0, without the univalence check.
inline BoettcherPoint boettcher_point_unchecked(const BoettcherContext& ctx, Complex z) {
    if (std::abs(z) < ctx.trap_radius) return boettcher_point_local(ctx, z);
    std::vector<Complex> path;
    const Membership m = in_immediate_basin(ctx.family, z, kDefaultMaxIter, &path);
    if (m != Membership::Inside) throw Error(ErrorKind::OutsideDomain, "point is not in the immediate basin of 0");
    return continue_along(ctx, path);
}

} // namespace detail

inline BoettcherContext BoettcherContext::make(const Family& f) {
    BoettcherContext ctx{f, f.mu(), tanfam::trap_radius(f), kProductTerms, 0.0, 1.0};
    const int m = f.degree();
    for (int i = 0; i < 64; ++i) {
        const Complex z = std::polar(ctx.trap_radius, 2.0 * pi * i / 64.0);
        const Jet lg = detail::log_tan_ratio(Jet{ipow(z, f.q())});
        const double dev = std::abs(std::exp(lg.v * (static_cast<double>(f.p()) / m)) - 1.0);
        ctx.decay_constant = std::max(ctx.decay_constant, dev / std::pow(ctx.trap_radius, m - 1));
    }
    const Complex v = asymptotic_values(f).v;
    if (in_immediate_basin(f, v) == Membership::Inside) {
        try {
            const BoettcherPoint at_v = detail::boettcher_point_unchecked(ctx, v);
            ctx.domain_radius = std::pow(std::abs(at_v.value), 1.0 / m);
        } catch (const Error&) {
            ctx.domain_radius = std::abs(boettcher_point_local(ctx, std::polar(ctx.trap_radius * 0.5, 0.0)).value);
        }
    }
    return ctx;
}

/// phi with branches; throws OutsideDomain off B0 or outside the univalence domain.
inline BoettcherPoint boettcher_point(const BoettcherContext& ctx, Complex z) {
    BoettcherPoint out = detail::boettcher_point_unchecked(ctx, z);
    if (std::abs(out.value) >= ctx.domain_radius)
        throw Error(ErrorKind::OutsideDomain, "the pull-back of phi meets an asymptotic value");
    return out;
}

inline Complex boettcher_coord(const BoettcherContext& ctx, Complex z) { return boettcher_point(ctx, z).value; }

/// Coordinate of the monic conjugate h: phi_h(w) = phi_f(w / mu), tangent to the identity.
inline Complex boettcher_coord_monic(const BoettcherContext& ctx, Complex w) {
    return boettcher_coord(ctx, w / ctx.mu);
}

// ---------------------------------------------------------------------------
// Parameter plane

/// State carried along a parameter continuation: the (pq-1)-th root mu and the logs.
struct ParamPoint {
    Complex value{};
    Complex derivative{}; ///< d/dlambda
    Complex mu{};
    std::vector<Complex> logs;
};

namespace detail {

// phi_lambda(f_lambda^n(v_lambda)) with lambda as the variable, times (-i)^p when
// n = 0. mu is the root nearest to ref->mu (the principal root without reference).
inline std::optional<ParamPoint> evaluate_param(Complex lambda, int p, int q, int n, const ParamPoint* ref) {
    const int m = p * q;
    Family f = Family::make(lambda, p, q);
    Complex mu = f.mu();
    if (ref) {
        const double turns = std::round(std::arg(ref->mu / mu) * (m - 1) / (2.0 * pi));
        mu *= unit(2.0 * pi * turns / (m - 1));
        if (std::abs(std::arg(ref->mu / mu)) > pi / (2.0 * (m - 1))) return std::nullopt;
    }
    const Jet lam = Jet::variable(lambda);
    Jet z = Jet{i_pow(p)} * lam;
    for (int k = 0; k < n; ++k) {
        const Jet x = ipow(z, q);
        if (near_tan_pole(x.v)) return std::nullopt;
        z = lam * ipow(stable_tan(x), p);
    }
    ProductInput in{lam, root_with_value(lam, mu, m - 1), z, p, q, trap_radius(f), kDefaultMaxIter};
    auto prod = evaluate_product(in, ref ? &ref->logs : nullptr);
    if (!prod) return std::nullopt;
    const Complex norm = n == 0 ? i_pow(-p) : Complex{1.0, 0.0};
    return ParamPoint{norm * prod->value, norm * prod->derivative, mu, std::move(prod->logs)};
}

// The same quantity with branches carried along a B0 path in the dynamic plane.
inline Complex param_value_by_path(Complex lambda, int p, int q, int n) {
    const Family f = Family::make(lambda, p, q);
    const BoettcherContext ctx = BoettcherContext::make(f);
    Complex z = asymptotic_values(f).v;
    for (int k = 0; k < n; ++k) {
        const Extended w = eval(f, z);
        if (w.at_infinity) throw Error(ErrorKind::OutsideDomain, "asymptotic orbit hits a pole");
        z = w.value;
    }
    const Complex phi = detail::boettcher_point_unchecked(ctx, z).value;
    return n == 0 ? i_pow(-p) * phi : phi;
}

} // namespace detail

/// lambda -> (-i)^p phi_lambda(v_lambda) on C0, normalized so that the real segment
/// (0, t*) maps into the positive reals (mu is the principal root).
inline Complex param_phi(Complex lambda, int p, int q, const ParamOptions& opts = {}) {
    const Family f = Family::make(lambda, p, q);
    const ParamClass cls = classify_parameter(f, opts);
    if (!(cls.kind == ParamClass::Kind::Capture && cls.n == 0))
        throw Error(ErrorKind::NotInC0, "lambda is not in the central capture component");
    try {
        return detail::param_value_by_path(lambda, p, q, 0);
    } catch (const Error&) {
        throw Error(ErrorKind::NotInC0, "phi could not be continued to the asymptotic value");
    }
}

/// lambda -> phi_lambda(f^n_lambda(v_lambda)) on a capture component C_n, n >= 1.
inline Complex param_psi(Complex lambda, int p, int q, int n, const ParamOptions& opts = {}) {
    if (n < 1) throw Error(ErrorKind::InvalidConfig, "param_psi needs n >= 1");
    const Family f = Family::make(lambda, p, q);
    const ParamClass cls = classify_parameter(f, opts);
    if (!(cls.kind == ParamClass::Kind::Capture && cls.n == n))
        throw Error(ErrorKind::NotInCn, "lambda is not in a capture component of the requested order");
    const Complex z = [&] {
        Complex w = asymptotic_values(f).v;
        for (int k = 0; k < n; ++k) w = eval(f, w).value;
        return w;
    }();
    if (z == Complex{}) return {};
    try {
        return detail::param_value_by_path(lambda, p, q, n);
    } catch (const Error&) {
        throw Error(ErrorKind::NotInCn, "phi could not be evaluated at the captured iterate");
    }
}

// ---------------------------------------------------------------------------
// Rays

struct RayPoint {
    double s = 0.0;
    double theta = 0.0;
    Complex z{}; ///< dynamic point or parameter
};

struct RayOptions {
    double s_min = 1e-3;
    double s_max = 1.0 - 1e-4;
    int steps = 200;
};

struct RayTrace {
    std::vector<RayPoint> points;
    Complex landing{};          ///< Aitken extrapolation of the last points
    double landing_residual = 0.0;
    bool landed = false;        ///< landing_residual < 1e-5
    bool contracting = false;   ///< last two points within 1e-6
    bool truncated = false;     ///< stopped at the edge of the univalence domain
};

/// Target moduli: geometric in s up to 1/2, then geometric in 1 - s.
inline std::vector<double> ray_grid(const RayOptions& opts) {
    if (!(opts.s_min > 0.0 && opts.s_min < opts.s_max && opts.s_max < 1.0 && opts.steps >= 2))
        throw Error(ErrorKind::InvalidConfig, "ray grid needs 0 < s_min < s_max < 1 and steps >= 2");
    std::vector<double> grid;
    const double mid = std::clamp(0.5, opts.s_min, opts.s_max);
    const int first = opts.steps / 2;
    const int second = opts.steps - first;
    for (int i = 0; i <= first; ++i) grid.push_back(opts.s_min * std::pow(mid / opts.s_min, static_cast<double>(i) / first));
    for (int i = 1; i <= second; ++i)
        grid.push_back(1.0 - (1.0 - mid) * std::pow((1.0 - opts.s_max) / (1.0 - mid), static_cast<double>(i) / second));
    return grid;
}

namespace detail {

inline constexpr double kRayResidual = 1e-12;

// Newton on coord(x) = target from `guess`, branches following `ref`.
template <class Point, class Eval>
std::optional<Point> newton_on_coord(Eval&& evaluate, Complex guess, Complex target, const Point& ref, Complex& x_out) {
    Complex x = guess;
    for (int it = 0; it < 40; ++it) {
        auto pt = evaluate(x, ref);
        if (!pt) return std::nullopt;
        const Complex r = pt->value - target;
        if (std::abs(r) < kRayResidual * (1.0 + std::abs(target))) {
            x_out = x;
            return pt;
        }
        if (std::abs(pt->derivative) < 1e-300) return std::nullopt;
        const Complex dx = r / pt->derivative;
        if (std::abs(dx) > 0.5 * (1.0 + std::abs(x))) return std::nullopt;
        x -= dx;
    }
    return std::nullopt;
}

template <class Point, class Eval>
RayTrace continue_ray(Eval&& evaluate, Complex x0, Point at_x0, double theta, const RayOptions& opts,
                      double s_limit) {
    const std::vector<double> grid = ray_grid(opts);
    const Complex dir = unit(2.0 * pi * theta);
    RayTrace trace;
    Complex x = x0;
    Point cur = std::move(at_x0);
    double s_cur = std::abs(cur.value);
    {
        Complex xs{};
        auto first = newton_on_coord(evaluate, x, grid.front() * dir, cur, xs);
        if (!first) throw Error(ErrorKind::ContinuationLost, "ray start did not converge");
        x = xs;
        cur = std::move(*first);
        s_cur = grid.front();
        trace.points.push_back({s_cur, theta, x});
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double s_goal = grid[i];
        if (s_goal >= s_limit) {
            trace.truncated = true;
            break;
        }
        int splits = 0;
        while (s_cur < s_goal) {
            double step = s_goal - s_cur;
            for (int tries = 0;; ++tries) {
                const double s_next = s_cur + step;
                const Complex target = s_next * dir;
                const Complex guess = x + (target - cur.value) / cur.derivative;
                Complex xn{};
                auto pt = newton_on_coord(evaluate, guess, target, cur, xn);
                if (pt) {
                    x = xn;
                    cur = std::move(*pt);
                    s_cur = s_next;
                    break;
                }
                if (++splits > kMaxContinuationSplits)
                    throw Error(ErrorKind::ContinuationLost, "Newton failed after 20 step bisections");
                step *= 0.5;
            }
        }
        s_cur = s_goal;
        trace.points.push_back({s_goal, theta, x});
    }
    const std::size_t n = trace.points.size();
    if (n >= 3) {
        std::vector<Complex> est;
        for (std::size_t i = n >= 8 ? n - 8 : 0; i + 2 < n; ++i) {
            const Complex a = trace.points[i].z;
            const Complex b = trace.points[i + 1].z;
            const Complex c = trace.points[i + 2].z;
            const Complex den = c - 2.0 * b + a;
            est.push_back(std::abs(den) > 1e-300 ? c - (c - b) * (c - b) / den : c);
        }
        trace.landing = est.back();
        trace.landing_residual = est.size() >= 2 ? std::abs(est.back() - est[est.size() - 2]) : 0.0;
        trace.landed = trace.landing_residual < 1e-5;
        trace.contracting = std::abs(trace.points[n - 1].z - trace.points[n - 2].z) < 1e-6;
    } else if (n > 0) {
        trace.landing = trace.points.back().z;
    }
    return trace;
}

} // namespace detail

/// Dynamic ray phi^-1(s e^(2 pi i theta)) in B0, started at z ~ target / mu.
inline RayTrace trace_dynamic_ray(const BoettcherContext& ctx, double theta, const RayOptions& opts = {}) {
    const Complex z0 = opts.s_min * unit(2.0 * pi * theta) / ctx.mu;
    if (std::abs(z0) >= ctx.trap_radius) throw Error(ErrorKind::InvalidConfig, "s_min too large for the trap disk");
    auto evaluate = [&](Complex z, const BoettcherPoint& ref) { return boettcher_coord_near(ctx, z, ref); };
    return detail::continue_ray(evaluate, z0, boettcher_point_local(ctx, z0), theta, opts, ctx.domain_radius);
}

/// Parameter ray in C0 (n = 0, seed unused) or in the C_n component whose center is
/// `center` (n >= 1; found with find_center). Near the center psi vanishes to order p.
inline RayTrace trace_param_ray(int p, int q, int n, double theta, const RayOptions& opts = {},
                                Complex center = {}) {
    const int m = p * q;
    auto evaluate = [&](Complex lambda, const ParamPoint& ref) -> std::optional<ParamPoint> {
        if (lambda == Complex{}) return std::nullopt;
        return detail::evaluate_param(lambda, p, q, n, &ref);
    };
    const Complex target = opts.s_min * unit(2.0 * pi * theta);
    Complex start{};
    std::optional<ParamPoint> at_start;
    if (n == 0) {
        // (-i)^p phi ~ mu^pq = lambda^(pq/(pq-1))
        start = std::pow(target, static_cast<double>(m - 1) / m);
        at_start = detail::evaluate_param(start, p, q, 0, nullptr);
    } else {
        if (center == Complex{}) throw Error(ErrorKind::InvalidConfig, "capture rays need the component center");
        const double delta = 1e-6 * (1.0 + std::abs(center));
        auto probe = detail::evaluate_param(center + delta, p, q, n, nullptr);
        if (!probe) throw Error(ErrorKind::ContinuationLost, "psi undefined next to the center");
        const Complex lead = probe->value / std::pow(delta, p);
        start = center + principal_root(target / lead, p);
        at_start = detail::evaluate_param(start, p, q, n, nullptr);
    }
    if (!at_start) throw Error(ErrorKind::ContinuationLost, "ray start outside the component");
    return detail::continue_ray(evaluate, start, std::move(*at_start), theta, opts, 1.0);
}

} // namespace tanfam
