#include <gtest/gtest.h>

#include <random>

#include "tanfam/boettcher.hpp"
#include "tanfam/landmarks.hpp"

using namespace tanfam;

TEST(MonicConjugate, LeadingCoefficientIsOne) {
    for (const int p : {1, 3}) {
        const MonicConjugate h = monic_conjugate(Family::make({0.4, 0.1}, p, 2));
        const Complex w{1e-3, 0.0};
        EXPECT_LT(std::abs(h(w).value / ipow(w, 2 * p) - 1.0), 1e-4);
    }
}

TEST(MonicConjugate, ConjugatesTheFamily) {
    const Family f = Family::make({0.4, 0.1}, 1, 2);
    const MonicConjugate h = monic_conjugate(f);
    const double trap = trap_radius(f);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Complex z = std::polar(trap * std::sqrt(u(rng)), 2.0 * pi * u(rng));
        const Complex lhs = h(h.conjugate(z)).value;
        const Complex rhs = h.conjugate(eval(f, z).value);
        EXPECT_LT(std::abs(lhs - rhs), 1e-11);
    }
}

TEST(Boettcher, FunctionalEquation) {
    const Family f = Family::make({0.4, 0.1}, 1, 2);
    const BoettcherContext ctx = BoettcherContext::make(f);
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Complex z = std::polar(ctx.trap_radius * std::sqrt(u(rng)), 2.0 * pi * u(rng));
        worst = std::max(worst, std::abs(boettcher_coord(ctx, eval(f, z).value) - ipow(boettcher_coord(ctx, z), 2)));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Boettcher, TangentToIdentity) {
    const BoettcherContext ctx = BoettcherContext::make(Family::make({0.4, 0.1}, 1, 2));
    for (const double r : {1e-2, 1e-3, 1e-4})
        for (int k = 0; k < 8; ++k) {
            const Complex w = std::polar(r, 2.0 * pi * k / 8);
            EXPECT_LT(std::abs(boettcher_coord_monic(ctx, w) - w), 10.0 * r * r + 1e-15 * r) << "r=" << r;
        }
}

TEST(Boettcher, TangentToIdentityHigherDegree) {
    const BoettcherContext ctx = BoettcherContext::make(Family::make({0.4, 0.1}, 3, 2));
    for (const double r : {1e-2, 1e-3, 1e-4})
        for (int k = 0; k < 8; ++k) {
            const Complex w = std::polar(r, 2.0 * pi * k / 8);
            EXPECT_LT(std::abs(boettcher_coord_monic(ctx, w) / w - 1.0), 10.0 * std::pow(r, 4) + 1e-14) << "r=" << r;
        }
}

TEST(Boettcher, ContinuesOutsideTheTrap) {
    const Family f = Family::make({0.4, 0.1}, 1, 2);
    const BoettcherContext ctx = BoettcherContext::make(f);
    const Complex z{0.5, 0.2};
    const Complex a = boettcher_coord(ctx, z);
    EXPECT_LT(std::abs(boettcher_coord(ctx, eval(f, z).value) - a * a), 1e-8);
}

TEST(ParamPhi, RealSegmentMapsToPositiveReals) {
    for (const double t : {0.1, 0.4, 0.7, 0.85}) {
        const Complex v = param_phi(t, 1, 2);
        EXPECT_GT(v.real(), 0.0);
        EXPECT_LT(std::abs(v.imag()), 1e-10 * std::abs(v));
    }
}

TEST(ParamPhi, ModulusIncreasesToOneAtMisiurewiczParameter) {
    const double ts = t_star(2);
    double last = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double t = ts * (1.0 - std::pow(0.5, i + 3));
        const double m = std::abs(param_phi(t, 1, 2));
        EXPECT_GT(m, last);
        EXPECT_LT(m, 1.0);
        last = m;
    }
    EXPECT_GT(last, 0.95);
}

TEST(ParamPhi, VanishesAtTheOrigin) {
    EXPECT_LT(std::abs(param_phi(std::polar(1e-3, pi / 5), 1, 2)), 0.1);
}

TEST(ParamPsi, TanhModelCaptureParameter) {
    // tanh-model coordinates
    const Complex lambda = lambda_from_tanh({1.22, 1.3}, 3, 2);
    const Complex psi = param_psi(lambda, 3, 2, 1);
    EXPECT_GT(std::abs(psi), 0.0);
    EXPECT_LT(std::abs(psi), 1.0);
    EXPECT_LT(std::abs(param_psi(lambda + 1e-6, 3, 2, 1) - psi), 1e-3);
}

TEST(ParamPsi, WrongComponentIsRejected) {
    EXPECT_THROW(param_psi(std::polar(0.3, 0.2), 1, 2, 1), Error);
}

TEST(Rays, ParameterRayZeroLandsAtMisiurewiczParameter) {
    const RayTrace tr = trace_param_ray(1, 2, 0, 0.0);
    EXPECT_LT(std::abs(tr.landing - t_star(2)), 1e-4);
    for (const RayPoint& rp : tr.points) {
        EXPECT_LT(std::abs(rp.z.imag()), 1e-9);
        const Complex phi = param_phi(rp.z, 1, 2);
        EXPECT_LT(std::abs(phi - std::polar(rp.s, 0.0)), 1e-9) << "s=" << rp.s;
    }
}

TEST(Rays, DynamicRayPointsHaveTheirCoordinate) {
    const BoettcherContext ctx = BoettcherContext::make(Family::make({0.4, 0.1}, 1, 2));
    const RayTrace tr = trace_dynamic_ray(ctx, 0.25);
    ASSERT_FALSE(tr.points.empty());
    for (const RayPoint& rp : tr.points)
        EXPECT_LT(std::abs(boettcher_coord(ctx, rp.z) - std::polar(rp.s, 2.0 * pi * 0.25)), 1e-9) << "s=" << rp.s;
}

TEST(Rays, CaptureRayNeedsCenter) {
    EXPECT_THROW(trace_param_ray(2, 2, 1, 0.0), Error);
}
