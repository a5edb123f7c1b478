#include <gtest/gtest.h>

#include "tanfam/landmarks.hpp"
#include "tanfam/parameter.hpp"

using namespace tanfam;

TEST(Center, EvenPowerFirstCenterIsRootPi) {
    const Landmark c = find_center(2, 2, 1, Complex{1.7, 0.0});
    EXPECT_EQ(c.kind, Landmark::Kind::Center);
    EXPECT_LT(std::abs(c.lambda - std::sqrt(pi)), 1e-9);
    EXPECT_EQ(classify_parameter(Family::make(c.lambda, 2, 2)), ParamClass::capture(1));
}

TEST(Center, OddPowerCentersOnImaginaryAxis) {
    const Landmark c = find_center(3, 2, 1, Complex{0.0, 1.7});
    // f(v) = 0 means (i^3 lambda)^2 = -lambda^2 in pi Z, so lambda = +-i (k pi)^(1/2).
    const Complex w = -c.lambda * c.lambda;
    const double k = std::round(w.real() / pi);
    EXPECT_GE(k, 1.0);
    EXPECT_LT(std::abs(w - k * pi), 1e-9);
    EXPECT_LT(std::abs(c.lambda.real()), 1e-9);
}

TEST(Center, HigherOrderCenterHitsZero) {
    const Landmark c = find_center(1, 2, 2, Complex{1.5, 0.2});
    const Family f = Family::make(c.lambda, 1, 2);
    const Complex v = asymptotic_values(f).v;
    EXPECT_LT(std::abs(eval(f, eval(f, v).value).value), 1e-9);
}

TEST(Misiurewicz, SquareMap) {
    const Landmark m = misiurewicz_t_star(1, 2);
    EXPECT_NEAR(m.lambda.real(), 0.8862269, 1e-7);
    ASSERT_TRUE(m.certificate.multiplier);
    EXPECT_LT(std::abs(*m.certificate.multiplier - pi), 1e-10);
}

TEST(Misiurewicz, CubeOfSquare) {
    const Landmark m = misiurewicz_t_star(3, 2);
    ASSERT_TRUE(m.certificate.multiplier);
    EXPECT_LT(std::abs(*m.certificate.multiplier - 3.0 * pi), 1e-10);
}

TEST(Misiurewicz, FixedPointResidual) {
    for (const auto& [p, q] : {std::pair{1, 2}, std::pair{3, 2}, std::pair{2, 2}, std::pair{2, 3}})
        EXPECT_LT(misiurewicz_fixed_residual(p, q), 1e-13) << "p=" << p << " q=" << q;
}

TEST(Parabolic, ThresholdForCubeOfSquare) {
    const ParabolicResult r = find_parabolic_t0(3, 2);
    const RealTanh g{3, 2};
    EXPECT_GE(r.t0, 1.0);
    EXPECT_LT(std::abs(g.dg(r.t0, r.x0) - 1.0), 1e-9);
    EXPECT_LT(std::abs(g.g(r.t0, r.x0) - r.x0), 1e-9);
    EXPECT_TRUE(r.below_attracted);
    EXPECT_TRUE(r.above_attracting);
}

TEST(Parabolic, ThresholdExceedsMisiurewiczRadius) {
    for (const auto& [p, q] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{3, 3}, std::pair{2, 3}})
        EXPECT_GT(find_parabolic_t0(p, q).t0, t_star(q)) << "p=" << p << " q=" << q;
}

TEST(Parabolic, IndependentBisectionOnFixedPointExistence) {
    // A positive fixed point of g_t exists iff max_x g_t(x)/x >= 1, i.e. t >= 1 / max_x h(x)/x.
    const RealTanh g{3, 2};
    double best = 0.0;
    for (int i = 1; i <= 200000; ++i) {
        const double x = 4.0 * i / 200000;
        best = std::max(best, g.g(1.0, x) / x);
    }
    EXPECT_NEAR(find_parabolic_t0(3, 2).t0, 1.0 / best, 1e-6);
}

TEST(VirtualCycle, ClosedFormForEvenPower) {
    const Landmark m = find_virtual_cycle_param(2, 2, 2, 0, 0);
    EXPECT_EQ(m.kind, Landmark::Kind::VirtualCycle);
    EXPECT_LT(std::abs(m.lambda + std::sqrt(pi / 2)), 1e-9);
    const Family f = Family::make(m.lambda + 1e-4, 2, 2);
    const Extended w = eval(f, asymptotic_values(f).v);
    EXPECT_FALSE(w.at_infinity);
    EXPECT_GT(std::abs(w.value), 1e3);
}

TEST(Symmetry, AllParityCasesBelowTolerance) {
    for (const auto& [p, q] : {std::pair{1, 2}, std::pair{3, 2}, std::pair{2, 2}, std::pair{2, 1}, std::pair{3, 3}}) {
        const SymmetryReport rep = verify_symmetries(p, q, 0.7, 1000);
        EXPECT_TRUE(rep.passed()) << "p=" << p << " q=" << q << " max " << rep.max_residual();
    }
}

TEST(Symmetry, RotationConjugatesEvenPower) {
    const double t = 0.7;
    const Complex w1 = SectorRoots::omega_of(2, 1);
    const Family ft = Family::make(t, 2, 2);
    const Family fr = Family::make(t * w1, 2, 2);
    for (const Complex z : {Complex{0.3, 0.1}, Complex{-0.2, 0.5}})
        EXPECT_LT(std::abs(eval(fr, w1 * z).value - w1 * eval(ft, z).value), 1e-12);
}

TEST(Symmetry, WorkedExampleTanhConjugacy) {
    const double t = 0.7;
    const Complex xi0 = SectorRoots::xi_of(2, 0);
    const Complex eta = i_pow(3) * xi0;
    const Family f = Family::make(xi0 * t, 3, 2);
    for (const Complex z : {Complex{0.3, 0.1}, Complex{-0.2, 0.5}, Complex{0.6, -0.4}})
        EXPECT_LT(std::abs(eval(f, -eta * z).value + eta * tanh_map(t, 3, 2, z)), 1e-12);
}
