#pragma once

// Named verification suites. Each suite returns a list of checks with the measured
// value and its tolerance; nothing here throws for a failed check.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tanfam/boettcher.hpp"
#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/landmarks.hpp"
#include "tanfam/parameter.hpp"
#include "tanfam/raster.hpp"
#include "tanfam/symbolic.hpp"

namespace tanfam {

struct Check {
    std::string name;
    double value = 0.0;     ///< measured quantity (residual, error or count)
    double tolerance = 0.0; ///< pass when value < tolerance; unused for boolean checks
    bool passed = false;
    std::string note;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

struct VerifyConfig {
    std::optional<int> p; ///< restricts suites that sweep (p, q) cases
    std::optional<int> q;
    std::uint64_t seed = 0;
    int samples = 1000;
    int disk_pairs = 10000;
    int disk_resolution = 64;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"symmetry", "misiurewicz", "disk",     "boettcher", "shift",
                                                "center",   "parabolic",   "ray",      "all"};
    return names;
}

namespace detail {

inline Check below(std::string name, double value, double tolerance, std::string note = {}) {
    return {std::move(name), value, tolerance, value < tolerance, std::move(note)};
}

inline Check holds(std::string name, bool ok, std::string note = {}) {
    return {std::move(name), ok ? 1.0 : 0.0, 0.0, ok, std::move(note)};
}

inline std::string pq_tag(int p, int q) { return "p=" + std::to_string(p) + " q=" + std::to_string(q); }

inline std::vector<std::pair<int, int>> cases(const VerifyConfig& cfg, std::vector<std::pair<int, int>> defaults) {
    if (cfg.p || cfg.q) return {{cfg.p.value_or(1), cfg.q.value_or(2)}};
    return defaults;
}

/// Runs `body`, turning library errors into a failed check.
inline void guarded(std::vector<Check>& out, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const Error& e) {
        out.push_back(holds(name, false, std::string(to_string(e.kind())) + ": " + e.what()));
    }
}

inline std::vector<Check> suite_symmetry(const VerifyConfig& cfg) {
    std::vector<Check> out;
    const auto all = cases(cfg, {{1, 2}, {3, 2}, {2, 2}, {2, 1}, {3, 1}, {1, 3}, {3, 3}});
    for (const auto& [p, q] : all)
        guarded(out, "symmetry " + pq_tag(p, q), [&] {
            const SymmetryReport rep = verify_symmetries(p, q, 0.7, cfg.samples, cfg.seed);
            for (const auto& c : rep.checks)
                out.push_back(below(pq_tag(p, q) + " " + c.name, c.max_residual, c.tolerance,
                                    std::to_string(c.count) + " samples"));
        });
    return out;
}

inline std::vector<Check> suite_misiurewicz(const VerifyConfig& cfg) {
    std::vector<Check> out;
    for (const auto& [p, q] : cases(cfg, {{1, 2}, {3, 2}, {2, 2}}))
        guarded(out, "misiurewicz " + pq_tag(p, q), [&] {
            const Landmark m = misiurewicz_t_star(p, q);
            const double want = p * q * pi / 2;
            out.push_back(below(pq_tag(p, q) + " fixed-point residual", misiurewicz_fixed_residual(p, q), 1e-12));
            out.push_back(below(pq_tag(p, q) + " landing residual", m.certificate.residual, 1e-12,
                                "order " + std::to_string(m.order)));
            out.push_back(below(pq_tag(p, q) + " multiplier - pq pi/2", std::abs(*m.certificate.multiplier - want), 1e-10));
        });
    return out;
}

inline std::vector<Check> suite_disk(const VerifyConfig& cfg) {
    std::vector<Check> out;
    for (const auto& [p, q] : cases(cfg, {{1, 2}, {3, 2}, {2, 2}}))
        guarded(out, "disk " + pq_tag(p, q), [&] {
            const double ts = t_star(q);
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            auto in_disk = [&] {
                double r = 0.0;
                while (r == 0.0) r = ts * std::sqrt(u(rng));
                return std::polar(r, 2.0 * pi * u(rng));
            };
            int violations = 0;
            double worst = 0.0;
            for (int i = 0; i < cfg.disk_pairs; ++i) {
                const Complex lambda = in_disk();
                const Complex z = in_disk();
                const Extended w = eval(Family::make(lambda, p, q), z);
                const double ratio = w.at_infinity ? INFINITY : std::abs(w.value) / std::abs(z);
                worst = std::max(worst, ratio);
                violations += !(ratio < 1.0);
            }
            out.push_back(holds(pq_tag(p, q) + " |f(z)| < |z| on random pairs", violations == 0,
                                std::to_string(cfg.disk_pairs) + " pairs, max |f(z)|/|z| = " + std::to_string(worst)));
            RenderOptions o;
            o.window = {-ts, ts, -ts, ts};
            o.width = o.height = cfg.disk_resolution;
            const Raster r = render_param(p, q, o);
            int inside = 0;
            int wrong = 0;
            for (int iy = 0; iy < r.height; ++iy)
                for (int ix = 0; ix < r.width; ++ix) {
                    if (!(std::abs(r.center(ix, iy)) < ts)) continue;
                    ++inside;
                    const Cell& c = r.at(ix, iy);
                    wrong += !(c.tag == Tag::Capture && c.aux1 == 0);
                }
            out.push_back(holds(pq_tag(p, q) + " raster cells with |lambda| < t* are Capture{0}", wrong == 0,
                                std::to_string(inside) + " cells, " + std::to_string(wrong) + " not Capture{0}"));
        });
    return out;
}

inline std::vector<Check> suite_boettcher(const VerifyConfig& cfg) {
    std::vector<Check> out;
    for (const auto& [p, q] : cases(cfg, {{1, 2}, {3, 2}}))
        for (const Complex lambda : {Complex{0.4, 0.1}, std::polar(0.2, pi / 3)}) {
            const std::string tag = pq_tag(p, q) + " lambda=" + std::to_string(lambda.real()) + "," + std::to_string(lambda.imag());
            guarded(out, "boettcher " + tag, [&] {
                const Family f = Family::make(lambda, p, q);
                const BoettcherContext ctx = BoettcherContext::make(f);
                std::mt19937_64 rng(cfg.seed);
                std::uniform_real_distribution<double> u(0.0, 1.0);
                double worst = 0.0;
                for (int i = 0; i < cfg.samples; ++i) {
                    const Complex z = std::polar(ctx.trap_radius * std::sqrt(u(rng)), 2.0 * pi * u(rng));
                    const Complex lhs = boettcher_coord(ctx, eval(f, z).value);
                    const Complex rhs = ipow(boettcher_coord(ctx, z), f.degree());
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
                out.push_back(below(tag + " |phi(f(z)) - phi(z)^pq|", worst, 1e-8));
                double slope = 0.0;
                for (int k = 0; k < 8; ++k) {
                    const Complex w = std::polar(1e-4, 2.0 * pi * k / 8);
                    slope = std::max(slope, std::abs(boettcher_coord_monic(ctx, w) / w - 1.0));
                }
                out.push_back(below(tag + " tangency |phi(w)/w - 1| at |w| = 1e-4", slope, 1e-3));
            });
        }
    return out;
}

inline std::vector<Check> suite_shift(const VerifyConfig&) {
    std::vector<Check> out;
    guarded(out, "shift", [&] {
        const ShiftReport rep = verify_shift_conjugacy(Family::make(std::polar(0.3, pi / 5), 1, 2), 4, 2);
        const std::string n = std::to_string(rep.count) + " itineraries";
        out.push_back(below("shift |f(Xi(s)) - Xi(sigma s)|", rep.max_residual, 1e-8, n));
        out.push_back(below("codec round trip", rep.max_roundtrip, 1e-6, n));
        out.push_back(holds("sibling contraction by 2 per depth", !rep.slow_contraction,
                            "max ratio " + std::to_string(rep.max_ratio)));
    });
    return out;
}

inline std::vector<Check> suite_center(const VerifyConfig&) {
    std::vector<Check> out;
    guarded(out, "center", [&] {
        const Landmark c = find_center(2, 2, 1, Complex{1.7, 0.0});
        out.push_back(below("center p=2 q=2 n=1 from 1.7: |lambda - sqrt(pi)|", std::abs(c.lambda - std::sqrt(pi)), 1e-9));
        const ParamClass cls = classify_parameter(Family::make(c.lambda, 2, 2));
        out.push_back(holds("classify_parameter(center) = Capture{1}", cls == ParamClass::capture(1),
                            cls.kind == ParamClass::Kind::Capture ? "n = " + std::to_string(cls.n) : "not a capture"));
    });
    return out;
}

inline std::vector<Check> suite_parabolic(const VerifyConfig&) {
    std::vector<Check> out;
    guarded(out, "parabolic", [&] {
        const ParabolicResult r = find_parabolic_t0(3, 2);
        const RealTanh g{3, 2};
        out.push_back(below("|g'(x0) - 1|", std::abs(g.dg(r.t0, r.x0) - 1.0), 1e-9, "t0 = " + std::to_string(r.t0)));
        out.push_back(holds("t0 >= 1 > t*", r.t0 >= 1.0 && 1.0 > t_star(2)));
        out.push_back(holds("t0 - delta: asymptotic value attracted to 0", r.below_attracted));
        out.push_back(holds("t0 + delta: attracting positive fixed point", r.above_attracting,
                            "multiplier " + std::to_string(r.above_multiplier)));
    });
    return out;
}

inline std::vector<Check> suite_ray(const VerifyConfig&) {
    std::vector<Check> out;
    guarded(out, "ray", [&] {
        RayOptions o;
        o.s_max = 1.0 - 1e-4;
        const RayTrace tr = trace_param_ray(1, 2, 0, 0.0, o);
        out.push_back(below("parameter ray theta=0 p=1 q=2: |landing - t*|", std::abs(tr.landing - t_star(2)), 1e-4,
                            std::to_string(tr.points.size()) + " points"));
    });
    return out;
}

} // namespace detail

/// Runs a named suite; "all" concatenates every suite. Unknown names throw InvalidConfig.
inline std::vector<SuiteReport> run_verify(const std::string& suite, const VerifyConfig& cfg = {}) {
    using Runner = std::vector<Check> (*)(const VerifyConfig&);
    static const std::vector<std::pair<std::string, Runner>> table{
        {"symmetry", detail::suite_symmetry}, {"misiurewicz", detail::suite_misiurewicz},
        {"disk", detail::suite_disk},         {"boettcher", detail::suite_boettcher},
        {"shift", detail::suite_shift},       {"center", detail::suite_center},
        {"parabolic", detail::suite_parabolic}, {"ray", detail::suite_ray},
    };
    std::vector<SuiteReport> out;
    for (const auto& [name, run] : table) {
        if (suite != "all" && suite != name) continue;
        const auto start = std::chrono::steady_clock::now();
        SuiteReport rep{name, run(cfg), 0.0};
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(rep));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidConfig, "unknown suite: " + suite);
    return out;
}

} // namespace tanfam
