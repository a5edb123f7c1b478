// Acceptance suite: one PASS/FAIL line per criterion with the measured values.
// Usage: acceptance [CLI_PATH]; criterion 10 needs the CLI binary.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "tanfam/verify.hpp"

using namespace tanfam;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// Suite outcome with the worst check spelled out.
Outcome from_suite(const std::string& suite) {
    const SuiteReport rep = run_verify(suite).front();
    Outcome o{rep.passed(), {}};
    std::ostringstream s;
    int shown = 0;
    for (const Check& c : rep.checks) {
        if (c.passed && shown >= 3) continue;
        if (shown++) s << "; ";
        s << (c.passed ? "" : "FAILED ") << c.name << " = " << fmt(c.value);
        if (c.tolerance > 0.0) s << " (< " << fmt(c.tolerance) << ")";
        if (!c.note.empty()) s << " [" << c.note << "]";
    }
    if (rep.checks.size() > 3) s << "; " << rep.checks.size() << " checks total";
    o.detail = s.str();
    return o;
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Outcome atlas_census() {
    RenderOptions o;
    o.window = {-2.0, 2.0, -2.0, 2.0};
    o.width = o.height = 1024;
    o.frame = ParamFrame::Tanh;
    o.workers = worker_count();
    const Raster r = render_param(3, 2, o);
    bool capture0 = false, capture_n = false, shell1 = false, shell2 = false;
    for (const Cell& c : r.cells) {
        capture0 = capture0 || (c.tag == Tag::Capture && c.aux1 == 0);
        capture_n = capture_n || (c.tag == Tag::Capture && c.aux1 >= 1);
        shell1 = shell1 || (c.tag == Tag::Shell && c.aux1 == 1);
        shell2 = shell2 || (c.tag == Tag::Shell && c.aux1 == 2);
    }
    const auto census = component_census(r);
    int central = 0, central_singletons = 0, capture_touching = 0, capture_touching_cells = 0;
    std::vector<const Component*> shells1;
    for (const Component& c : census) {
        if (c.tag == Tag::Capture && c.index == 0) {
            ++central;
            central_singletons += c.size == 1;
        }
        if (c.tag == Tag::Capture && c.touches_boundary) {
            ++capture_touching;
            capture_touching_cells += static_cast<int>(c.size);
        }
        if (c.tag == Tag::Shell && c.index == 1) shells1.push_back(&c);
    }
    // the 2q order-1 shell components are the largest Shell{1} components
    const std::size_t order1 = 4;
    std::size_t big_touching = 0;
    for (std::size_t i = 0; i < std::min(order1, shells1.size()); ++i) big_touching += shells1[i]->touches_boundary;

    const bool classes = capture0 && capture_n && shell1 && shell2;
    const bool one_central = central == 1;
    const bool shells_touch = shells1.size() >= order1 && big_touching == order1;
    const bool captures_inside = capture_touching == 0;
    std::ostringstream s;
    s << "tanh frame 1024^2: classes C0/Cn/S1/S2 " << (classes ? "present" : "MISSING") << "; Capture{0} components = "
      << central << " (" << central_singletons << " single cells)" << (one_central ? "" : " FAILED want 1")
      << "; largest 4 Shell{1} touching boundary = " << big_touching << (shells_touch ? "" : " FAILED want 4")
      << "; capture components touching boundary = " << capture_touching << " (" << capture_touching_cells << " cells)"
      << (captures_inside ? "" : " FAILED want 0") << "; components with diameter > 0.5 = "
      << count_larger_than(census, 0.5);
    return {classes && one_central && shells_touch && captures_inside, s.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
    if (cli.empty()) return {false, "CLI path not given"};
    const auto dir = std::filesystem::temp_directory_path() / ("tanfam-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    auto run = [&](int workers) {
        const std::string tag = "w" + std::to_string(workers);
        const std::string cmd = "\"" + cli + "\" render-param --p 3 --q 2 --window -2,2,-2,2 --res 256x256 --workers " +
                                std::to_string(workers) + " --out \"" + (dir / (tag + ".ppm")).string() + "\" --data \"" +
                                (dir / (tag + ".csv")).string() + "\" > /dev/null";
        return std::system(cmd.c_str());
    };
    const int rc1 = run(1);
    const int rc8 = run(8);
    Outcome o;
    if (rc1 != 0 || rc8 != 0) {
        o = {false, "CLI exit status " + std::to_string(rc1) + " / " + std::to_string(rc8)};
    } else {
        const std::string p1 = slurp(dir / "w1.ppm"), p8 = slurp(dir / "w8.ppm");
        const std::string c1 = slurp(dir / "w1.csv"), c8 = slurp(dir / "w8.csv");
        const bool same = !p1.empty() && !c1.empty() && p1 == p8 && c1 == c8;
        o = {same, "256^2 render-param: PPM " + std::to_string(p1.size()) + " bytes " + (p1 == p8 ? "identical" : "DIFFER") +
                       ", CSV " + std::to_string(c1.size()) + " bytes " + (c1 == c8 ? "identical" : "DIFFER")};
    }
    std::filesystem::remove_all(dir);
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::vector<Criterion> criteria{
        {1, "Misiurewicz certificate", 1.0, [] { return from_suite("misiurewicz"); }},
        {2, "contraction disk", 30.0, [] { return from_suite("disk"); }},
        {3, "Boettcher conjugacy", 5.0, [] { return from_suite("boettcher"); }},
        {4, "shift conjugacy", 60.0, [] { return from_suite("shift"); }},
        {5, "center of C1", 5.0, [] { return from_suite("center"); }},
        {6, "parabolic threshold", 5.0, [] { return from_suite("parabolic"); }},
        {7, "parameter-ray landing", 30.0, [] { return from_suite("ray"); }},
        {8, "symmetry suites", 5.0, [] { return from_suite("symmetry"); }},
        {9, "parameter atlas census", 300.0, atlas_census},
        {10, "determinism", 300.0, [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < c.budget_seconds;
        const bool ok = o.passed && in_budget;
        failed += !ok;
        std::printf("[%s] criterion %d %s: %s (%.2f s, budget %.0f s%s)\n", ok ? "PASS" : "FAIL", c.id, c.title,
                    o.detail.c_str(), secs, c.budget_seconds, in_budget ? "" : ", OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
