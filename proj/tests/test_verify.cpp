#include <gtest/gtest.h>

#include "tanfam/verify.hpp"

using namespace tanfam;

TEST(Verify, UnknownSuiteIsInvalidConfig) {
    try {
        run_verify("nope");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    }
}

TEST(Verify, SymmetrySuiteBelowTolerance) {
    const auto reps = run_verify("symmetry");
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_TRUE(reps[0].passed());
    for (const Check& c : reps[0].checks) EXPECT_LT(c.value, 1e-12) << c.name;
}

TEST(Verify, MisiurewiczRestrictedToOneCase) {
    VerifyConfig cfg;
    cfg.p = 1;
    cfg.q = 2;
    const auto reps = run_verify("misiurewicz", cfg);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_TRUE(reps[0].passed());
    EXPECT_EQ(reps[0].checks.size(), 3u);
}

TEST(Verify, AllSuitesPass) {
    const auto reps = run_verify("all");
    EXPECT_EQ(reps.size(), suite_names().size() - 1);
    for (const auto& r : reps) EXPECT_TRUE(r.passed()) << r.suite;
}
