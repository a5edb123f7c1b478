#include <gtest/gtest.h>

#include "tanfam/symbolic.hpp"

using namespace tanfam;

namespace {

std::vector<Itinerary> all_itineraries(const Family& f, int depth, int k_max) {
    std::vector<BranchIndex> alphabet;
    for (int k = -k_max; k <= k_max; ++k)
        for (int j = 0; j < f.q(); ++j)
            for (int l = 0; l < f.p(); ++l) alphabet.push_back({k, j, l});
    std::vector<Itinerary> out{Itinerary{}};
    for (int d = 0; d < depth; ++d) {
        std::vector<Itinerary> next;
        for (const auto& it : out)
            for (const auto& b : alphabet) {
                Itinerary e = it;
                e.symbols.push_back(b);
                next.push_back(e);
            }
        out = std::move(next);
    }
    return out;
}

} // namespace

TEST(Itinerary, ParseAndFormat) {
    const Itinerary it = parse_itinerary("1,0,0;-2,1;0,0,0");
    ASSERT_EQ(it.depth(), 3u);
    EXPECT_EQ(it.symbols[1], (BranchIndex{-2, 1, 0}));
    EXPECT_EQ(format_itinerary(it), "1,0,0;-2,1,0;0,0,0");
    EXPECT_EQ(parse_itinerary(format_itinerary(it)), it);
    EXPECT_THROW(parse_itinerary(""), Error);
    EXPECT_THROW(parse_itinerary("1,x,0"), Error);
}

TEST(Itinerary, AlphabetBoundIsEnforced) {
    const Family f = Family::make(std::polar(0.3, pi / 5), 1, 2);
    EXPECT_THROW(prepole_from_itinerary(f, parse_itinerary("4,0,0;0,0,0"), 3), Error);
    EXPECT_THROW(prepole_from_itinerary(f, parse_itinerary("0,2,0"), 3), Error);
}

TEST(Itinerary, DepthOneIsAPole) {
    const Family f = Family::make(std::polar(0.3, pi / 5), 1, 2);
    const Complex z = prepole_from_itinerary(f, parse_itinerary("1,0,0"));
    EXPECT_TRUE(eval(f, z).at_infinity);
    EXPECT_EQ(format_itinerary(itinerary_from_point(f, pole(f, 1, 0), 1)), "1,0,0");
}

TEST(Shift, ConjugacyOnAllDepthThreeSymbols) {
    const Family f = Family::make(std::polar(0.3, pi / 5), 1, 2);
    for (const Itinerary& it : all_itineraries(f, 3, 2)) {
        const Complex z = prepole_from_itinerary(f, it);
        const Extended fz = eval(f, z);
        ASSERT_FALSE(fz.at_infinity);
        EXPECT_LT(std::abs(fz.value - prepole_from_itinerary(f, it.tail())), 1e-8) << format_itinerary(it);
    }
}

TEST(Codec, RoundTripOnDepthThree) {
    const Family f = Family::make(std::polar(0.3, pi / 5), 1, 2);
    for (const Itinerary& it : all_itineraries(f, 3, 2)) {
        const Complex z = prepole_from_itinerary(f, it);
        EXPECT_EQ(itinerary_from_point(f, z, 3), it) << format_itinerary(it);
    }
}

TEST(Codec, ShiftCompatibility) {
    const Family f = Family::make(std::polar(0.3, pi / 5), 1, 2);
    for (const Itinerary& it : all_itineraries(f, 3, 1)) {
        const Complex z = prepole_from_itinerary(f, it);
        const Itinerary here = itinerary_from_point(f, z, 3);
        const Itinerary there = itinerary_from_point(f, eval(f, z).value, 2);
        EXPECT_EQ(there, here.tail()) << format_itinerary(it);
    }
}

TEST(Codec, OddPowerUsesAllSheets) {
    const Family f = Family::make({0.2, 0.1}, 3, 2);
    for (const Itinerary& it : all_itineraries(f, 2, 1)) {
        const Complex z = prepole_from_itinerary(f, it);
        EXPECT_LT(std::abs(prepole_from_itinerary(f, itinerary_from_point(f, z, 2)) - z), 1e-6) << format_itinerary(it);
    }
}

TEST(Codec, EvenPowerRotationMapsPrepolesToPrepoles) {
    // f(i z) = f(z) for p = q = 2, so i * prepole is again a prepole of the same depth.
    const Family f = Family::make({0.25, 0.1}, 2, 2);
    for (const Itinerary& it : all_itineraries(f, 2, 1)) {
        const Complex z = prepole_from_itinerary(f, it);
        const Complex w = I * z;
        EXPECT_TRUE(eval(f, eval(f, w).value).at_infinity || std::abs(eval(f, eval(f, w).value).value) > 1e8);
        EXPECT_LT(std::abs(prepole_from_itinerary(f, itinerary_from_point(f, w, 2)) - w), 1e-6) << format_itinerary(it);
    }
}

TEST(ShiftReport, SmallLambdaExhaustiveDepthFour) {
    const ShiftReport rep = verify_shift_conjugacy(Family::make(0.1, 1, 2), 4, 2);
    EXPECT_GE(rep.count, 10000u);
    EXPECT_LT(rep.max_residual, 1e-8);
    EXPECT_LT(rep.max_roundtrip, 1e-6);
    EXPECT_FALSE(rep.slow_contraction);
}

TEST(ShiftReport, NearBoundaryFlagsSlowContraction) {
    const ShiftReport rep = verify_shift_conjugacy(Family::make(0.88, 1, 2), 3, 2);
    EXPECT_TRUE(rep.slow_contraction);
    EXPECT_LT(rep.max_residual, 1e-8);
}
