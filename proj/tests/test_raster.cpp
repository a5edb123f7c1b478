#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "tanfam/landmarks.hpp"
#include "tanfam/raster.hpp"

using namespace tanfam;

namespace {

RenderOptions options(int res, ParamFrame frame = ParamFrame::Tan) {
    RenderOptions o;
    o.window = {-2.0, 2.0, -2.0, 2.0};
    o.width = o.height = res;
    o.frame = frame;
    return o;
}

const Raster& param_raster() {
    static const Raster r = render_param(3, 2, options(128));
    return r;
}

} // namespace

TEST(Window, CellCentersAreSymmetric) {
    const Window w{-2.0, 2.0, -2.0, 2.0};
    for (int ix = 0; ix < 37; ++ix)
        for (int iy = 0; iy < 37; ++iy) EXPECT_EQ(cell_center(w, 37, 37, ix, iy), -cell_center(w, 37, 37, 36 - ix, 36 - iy));
    EXPECT_EQ(cell_center(w, 4, 4, 0, 0), (Complex{-1.5, 1.5}));
}

TEST(Render, InvalidOptionsAreRejected) {
    const Family f = Family::make(0.5, 1, 2);
    RenderOptions o = options(8);
    EXPECT_THROW(render_dynamic(f, o), Error);
    o = options(32);
    o.window = {1.0, -1.0, -1.0, 1.0};
    EXPECT_THROW(render_dynamic(f, o), Error);
    o = options(32);
    o.aa = 0;
    EXPECT_THROW(render_dynamic(f, o), Error);
}

TEST(DynamicRaster, TanhModelHasZeroAndFixedPointBasins) {
    const Family f = Family::make(lambda_from_tanh({0.0, 2.0}, 3, 2), 3, 2);
    const Raster r = render_dynamic(f, options(96));
    std::size_t zero = 0;
    std::size_t cycle = 0;
    for (const Cell& c : r.cells) {
        zero += c.tag == Tag::Zero;
        cycle += c.tag == Tag::Cycle && c.aux1 == 1;
    }
    EXPECT_GT(zero, 0u);
    EXPECT_GT(cycle, 0u);
}

TEST(DynamicRaster, OddSymmetry) {
    const Family f = Family::make(lambda_from_tanh({0.0, 2.0}, 3, 2), 3, 2);
    const Raster r = render_dynamic(f, options(96));
    for (int iy = 0; iy < r.height; ++iy)
        for (int ix = 0; ix < r.width; ++ix)
            EXPECT_EQ(r.at(ix, iy).tag, r.at(r.width - 1 - ix, r.height - 1 - iy).tag) << ix << "," << iy;
}

TEST(ParamRaster, DiskIsCentralCapture) {
    const Raster& r = param_raster();
    const double ts = t_star(2);
    for (int iy = 0; iy < r.height; ++iy)
        for (int ix = 0; ix < r.width; ++ix) {
            if (std::abs(r.center(ix, iy)) >= ts) continue;
            EXPECT_EQ(r.at(ix, iy).tag, Tag::Capture);
            EXPECT_EQ(r.at(ix, iy).aux1, 0);
        }
}

TEST(ParamRaster, ContainsShellsOfPeriodOneAndTwo) {
    std::set<int> periods;
    for (const Cell& c : param_raster().cells)
        if (c.tag == Tag::Shell) periods.insert(c.aux1);
    EXPECT_TRUE(periods.count(1));
    EXPECT_TRUE(periods.count(2));
}

TEST(ParamRaster, ConjugationSymmetry) {
    const Raster& r = param_raster();
    for (int iy = 0; iy < r.height; ++iy)
        for (int ix = 0; ix < r.width; ++ix)
            EXPECT_EQ(r.at(ix, iy).key(), r.at(ix, r.height - 1 - iy).key()) << ix << "," << iy;
}

TEST(ParamRaster, WorkersDoNotChangeOutput) {
    RenderOptions o = options(48);
    const Raster a = render_param(1, 2, o);
    o.workers = 4;
    const Raster b = render_param(1, 2, o);
    std::ostringstream pa, pb, ca, cb;
    write_ppm(pa, a);
    write_ppm(pb, b);
    write_csv(ca, a);
    write_csv(cb, b);
    EXPECT_EQ(pa.str(), pb.str());
    EXPECT_EQ(ca.str(), cb.str());
}

TEST(Output, PpmLayout) {
    const Raster r = render_param(1, 2, options(16));
    std::ostringstream s;
    write_ppm(s, r);
    const std::string header = "P6\n16 16\n255\n";
    ASSERT_EQ(s.str().size(), header.size() + 16 * 16 * 3);
    EXPECT_EQ(s.str().substr(0, header.size()), header);
}

TEST(Output, CsvLayout) {
    const Raster r = render_param(1, 2, options(16));
    std::ostringstream s;
    write_csv(s, r);
    std::istringstream in(s.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "ix,iy,re,im,class,aux1,aux2");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 256u);
}

TEST(Census, OneCentralCaptureComponentContainingSmallParameter) {
    const Raster r = render_param(3, 2, options(128, ParamFrame::Tanh));
    const auto census = component_census(r);
    std::size_t central = 0;
    const auto cell = cell_of(r.window, r.width, r.height, Complex{0.1, 0.0});
    ASSERT_TRUE(cell);
    for (const Component& c : census) {
        if (c.tag != Tag::Capture || c.index != 0) continue;
        ++central;
        EXPECT_LE(c.ix0, cell->first);
        EXPECT_GE(c.ix1, cell->first);
        EXPECT_LE(c.iy0, cell->second);
        EXPECT_GE(c.iy1, cell->second);
        EXPECT_FALSE(c.touches_boundary);
    }
    EXPECT_EQ(central, 1u);
}

TEST(Census, SortedBySizeAndCoversRaster) {
    const auto census = component_census(param_raster());
    std::size_t total = 0;
    for (std::size_t i = 0; i < census.size(); ++i) {
        total += census[i].size;
        if (i > 0) {
            EXPECT_GE(census[i - 1].size, census[i].size);
        }
    }
    EXPECT_EQ(total, param_raster().cells.size());
}

TEST(Census, LargeComponentCountDecreasesWithThreshold) {
    const auto census = component_census(param_raster());
    std::size_t last = census.size();
    for (const double eps : {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const std::size_t n = count_larger_than(census, eps);
        EXPECT_LE(n, last);
        last = n;
    }
    EXPECT_EQ(count_larger_than(census, 100.0), 0u);
}

TEST(Census, LargeComponentsStableUnderRefinement) {
    const auto coarse = component_census(param_raster());
    const auto fine = component_census(render_param(3, 2, options(256)));
    EXPECT_EQ(count_larger_than(coarse, 0.5), count_larger_than(fine, 0.5));
}

TEST(Census, ShellOfPeriodOneTouchesBoundary) {
    bool touches = false;
    for (const Component& c : component_census(param_raster()))
        touches = touches || (c.tag == Tag::Shell && c.index == 1 && c.touches_boundary);
    EXPECT_TRUE(touches);
}
