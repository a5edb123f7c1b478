// tanfam: atlas renders, landmark search, rays, symbolic coding and verification
// suites for f(z) = lambda tan^p(z^q).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tanfam/boettcher.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/landmarks.hpp"
#include "tanfam/parameter.hpp"
#include "tanfam/raster.hpp"
#include "tanfam/symbolic.hpp"
#include "tanfam/verify.hpp"

using nlohmann::json;
using namespace tanfam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidConfig = 2;

struct Options {
    int p = 1;
    int q = 2;
    std::string lambda;
    std::string window = "-2,2,-2,2";
    std::string res = "512x512";
    int max_iter = kDefaultMaxIter;
    std::string mode = "exact";
    std::string frame = "tan";
    std::string out;
    std::string data;
    int workers = 1;
    std::uint64_t seed_rng = 0;
    int aa = 1;
    std::string space = "param";
    double theta = 0.0;
    std::string kind;
    int n = 1;
    int ray_n = 0;
    std::string seed;
    std::int64_t k = 0;
    int j = 0;
    std::string itinerary;
    std::string suite = "all";
    int k_max = kDefaultAlphabet;
};

std::vector<double> split_numbers(const std::string& text, std::size_t count, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidConfig, std::string("malformed ") + what + ": " + text);
        }
    }
    if (out.size() != count) throw Error(ErrorKind::InvalidConfig, std::string("malformed ") + what + ": " + text);
    return out;
}

Complex parse_complex(const std::string& text, const char* what) {
    const auto v = split_numbers(text, 2, what);
    return {v[0], v[1]};
}

Window parse_window(const std::string& text) {
    const auto v = split_numbers(text, 4, "--window");
    return {v[0], v[1], v[2], v[3]};
}

std::pair<int, int> parse_res(const std::string& text) {
    int w = 0;
    int h = 0;
    char x = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &extra) != 3 || (x != 'x' && x != 'X'))
        throw Error(ErrorKind::InvalidConfig, "malformed --res (expected WxH): " + text);
    return {w, h};
}

CaptureMode parse_mode(const std::string& m) {
    if (m == "fast") return CaptureMode::Fast;
    if (m == "exact") return CaptureMode::Exact;
    if (m == "raster") return CaptureMode::Raster;
    throw Error(ErrorKind::InvalidConfig, "--mode must be fast, exact or raster");
}

Complex require_lambda(const Options& o) {
    if (o.lambda.empty()) throw Error(ErrorKind::InvalidConfig, "--lambda RE,IM is required");
    return parse_complex(o.lambda, "--lambda");
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

RenderOptions render_options(const Options& o) {
    RenderOptions r;
    r.window = parse_window(o.window);
    std::tie(r.width, r.height) = parse_res(o.res);
    r.max_iter = o.max_iter;
    r.mode = parse_mode(o.mode);
    r.workers = o.workers;
    r.aa = o.aa;
    if (o.frame == "tanh")
        r.frame = ParamFrame::Tanh;
    else if (o.frame != "tan")
        throw Error(ErrorKind::InvalidConfig, "--frame must be tan or tanh");
    return r;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot open output file: " + path);
    return f;
}

void emit(const Options& o, const json& doc) {
    if (o.out.empty()) {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    auto f = open_out(o.out);
    f << doc.dump(2) << '\n';
}

Raster render(const Options& o, bool param) {
    const RenderOptions r = render_options(o);
    if (param) return render_param(o.p, o.q, r);
    return render_dynamic(Family::make(require_lambda(o), o.p, o.q), r);
}

json class_counts(const Raster& r) {
    std::map<std::string, std::size_t> counts;
    for (const Cell& c : r.cells) {
        std::string name = to_string(c.tag);
        if (c.tag == Tag::Capture || c.tag == Tag::Shell || c.tag == Tag::Cycle || c.tag == Tag::Neutral)
            name += "{" + std::to_string(c.aux1) + "}";
        ++counts[name];
    }
    return counts;
}

int cmd_render(const Options& o, bool param) {
    const Raster r = render(o, param);
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        write_ppm(f, r);
    }
    if (!o.data.empty()) {
        auto f = open_out(o.data);
        write_csv(f, r);
    }
    json doc{{"width", r.width}, {"height", r.height}, {"classes", class_counts(r)}};
    std::cout << doc.dump() << '\n';
    return kExitOk;
}

json component_json(const Component& c) {
    return {{"class", to_string(c.tag)},
            {"index", c.index},
            {"size", c.size},
            {"bbox", {c.ix0, c.iy0, c.ix1, c.iy1}},
            {"representative", complex_json(c.representative)},
            {"diameter", c.diameter},
            {"touches_boundary", c.touches_boundary}};
}

int cmd_census(const Options& o) {
    if (o.space != "param" && o.space != "dynamic") throw Error(ErrorKind::InvalidConfig, "--space must be dynamic or param");
    const Raster r = render(o, o.space == "param");
    const auto census = component_census(r);
    std::ostringstream lines;
    for (const Component& c : census) lines << component_json(c).dump() << '\n';
    if (o.data.empty()) {
        std::cout << lines.str();
    } else {
        auto f = open_out(o.data);
        f << lines.str();
    }
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        write_ppm(f, r);
    }
    return kExitOk;
}

int cmd_trace_ray(const Options& o) {
    RayTrace tr;
    if (o.space == "dynamic") {
        const Family f = Family::make(require_lambda(o), o.p, o.q);
        tr = trace_dynamic_ray(BoettcherContext::make(f), o.theta);
    } else if (o.space == "param") {
        std::optional<Complex> center;
        if (!o.seed.empty()) center = parse_complex(o.seed, "--seed");
        const int n = o.ray_n;
        if (n < 0) throw Error(ErrorKind::InvalidConfig, "--n must be >= 0");
        tr = n == 0 ? trace_param_ray(o.p, o.q, 0, o.theta)
                    : trace_param_ray(o.p, o.q, n, o.theta, {},
                                      center ? find_center(o.p, o.q, n, *center).lambda : Complex{});
    } else {
        throw Error(ErrorKind::InvalidConfig, "--space must be dynamic or param");
    }
    json pts = json::array();
    for (const RayPoint& rp : tr.points) pts.push_back({{"s", rp.s}, {"z", complex_json(rp.z)}});
    json doc{{"space", o.space},
             {"theta", o.theta},
             {"points", pts},
             {"landing", complex_json(tr.landing)},
             {"landing_residual", tr.landing_residual},
             {"landed", tr.landed},
             {"contracting", tr.contracting},
             {"truncated", tr.truncated}};
    emit(o, doc);
    return kExitOk;
}

json landmark_json(const Landmark& m) {
    json cert{{"residual", m.certificate.residual}};
    if (m.certificate.multiplier) cert["multiplier"] = complex_json(*m.certificate.multiplier);
    if (m.certificate.point) cert["point"] = complex_json(*m.certificate.point);
    return {{"kind", to_string(m.kind)}, {"lambda", complex_json(m.lambda)}, {"order", m.order}, {"certificate", cert}};
}

int cmd_find(const Options& o) {
    json doc;
    const Complex seed = o.seed.empty() ? Complex{} : parse_complex(o.seed, "--seed");
    if (o.kind == "center") {
        if (o.seed.empty()) throw Error(ErrorKind::InvalidConfig, "--seed RE,IM is required for centers");
        doc = landmark_json(find_center(o.p, o.q, o.n, seed));
    } else if (o.kind == "misiurewicz") {
        doc = landmark_json(misiurewicz_t_star(o.p, o.q));
    } else if (o.kind == "parabolic") {
        const ParabolicResult r = find_parabolic_t0(o.p, o.q);
        doc = landmark_json(r.landmark);
        doc["t0"] = r.t0;
        doc["x0"] = r.x0;
        doc["below_attracted"] = r.below_attracted;
        doc["above_attracting"] = r.above_attracting;
        doc["above_multiplier"] = r.above_multiplier;
    } else if (o.kind == "virtual") {
        doc = landmark_json(find_virtual_cycle_param(o.p, o.q, o.n, o.k, o.j, seed));
    } else {
        throw Error(ErrorKind::InvalidConfig, "--kind must be center, misiurewicz, parabolic or virtual");
    }
    emit(o, doc);
    return kExitOk;
}

int cmd_symbol(const Options& o) {
    const Family f = Family::make(require_lambda(o), o.p, o.q);
    const Itinerary it = parse_itinerary(o.itinerary);
    const Complex z = prepole_from_itinerary(f, it, o.k_max);
    json doc{{"itinerary", format_itinerary(it)}, {"point", complex_json(z)}};
    if (it.depth() >= 2) {
        const Complex next = prepole_from_itinerary(f, it.tail(), o.k_max);
        const Extended fz = eval(f, z);
        doc["shift_residual"] = fz.at_infinity ? json(nullptr) : json(std::abs(fz.value - next));
    }
    const Itinerary back = itinerary_from_point(f, z, static_cast<int>(it.depth()));
    doc["decoded"] = format_itinerary(back);
    doc["roundtrip"] = std::abs(prepole_from_itinerary(f, back, std::numeric_limits<int>::max()) - z);
    emit(o, doc);
    return kExitOk;
}

int cmd_verify(const Options& o, bool has_p, bool has_q) {
    VerifyConfig cfg;
    if (has_p) cfg.p = o.p;
    if (has_q) cfg.q = o.q;
    cfg.seed = o.seed_rng;
    const auto reports = run_verify(o.suite, cfg);
    bool ok = true;
    json suites = json::array();
    for (const auto& r : reports) {
        json checks = json::array();
        for (const Check& c : r.checks)
            checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}, {"note", c.note}});
        suites.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"seconds", r.seconds}, {"checks", checks}});
        ok = ok && r.passed();
    }
    emit(o, json{{"passed", ok}, {"suites", suites}});
    return ok ? kExitOk : kExitCheckFailed;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--p", o.p, "power p >= 1");
    cmd->add_option("--q", o.q, "power q >= 1 (pq > 1)");
    cmd->add_option("--lambda", o.lambda, "lambda as RE,IM");
    cmd->add_option("--max-iter", o.max_iter, "iteration budget per orbit");
    cmd->add_option("--out", o.out, "output file (PPM for renders, JSON otherwise)");
    cmd->add_option("--seed-rng", o.seed_rng, "seed for sample-based checks");
}

void add_raster(CLI::App* cmd, Options& o) {
    cmd->add_option("--window", o.window, "X0,X1,Y0,Y1");
    cmd->add_option("--res", o.res, "WxH");
    cmd->add_option("--mode", o.mode, "capture index: fast, exact or raster");
    cmd->add_option("--frame", o.frame, "parameter coordinates: tan or tanh");
    cmd->add_option("--data", o.data, "CSV dump (renders) or JSON lines (census)");
    cmd->add_option("--workers", o.workers, "worker threads");
    cmd->add_option("--aa", o.aa, "N x N subsamples per cell");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamics and parameter atlas of lambda tan^p(z^q)"};
    app.require_subcommand(1);
    Options o;

    auto* rd = app.add_subcommand("render-dynamic", "classify the dynamic plane of f_lambda");
    add_common(rd, o);
    add_raster(rd, o);
    auto* rp = app.add_subcommand("render-param", "classify the parameter plane");
    add_common(rp, o);
    add_raster(rp, o);
    auto* cs = app.add_subcommand("census", "connected components of a rendered raster");
    add_common(cs, o);
    add_raster(cs, o);
    cs->add_option("--space", o.space, "dynamic or param");
    auto* tr = app.add_subcommand("trace-ray", "dynamic or parameter ray");
    add_common(tr, o);
    tr->add_option("--space", o.space, "dynamic or param");
    tr->add_option("--theta", o.theta, "angle in turns");
    tr->add_option("--n", o.ray_n, "capture index of the component (param)");
    tr->add_option("--seed", o.seed, "seed for the component center, RE,IM (n >= 1)");
    auto* fd = app.add_subcommand("find", "locate a distinguished parameter");
    add_common(fd, o);
    fd->add_option("--kind", o.kind, "center, misiurewicz, parabolic or virtual")->required();
    fd->add_option("--n", o.n, "order");
    fd->add_option("--seed", o.seed, "Newton seed RE,IM");
    fd->add_option("--k", o.k, "pole index k (virtual)");
    fd->add_option("--j", o.j, "pole sheet j (virtual)");
    auto* sy = app.add_subcommand("symbol", "prepole of an itinerary");
    add_common(sy, o);
    sy->add_option("--itinerary", o.itinerary, "k,j,l;k,j,l;...")->required();
    sy->add_option("--k-max", o.k_max, "alphabet bound |k| <= K");
    auto* vf = app.add_subcommand("verify", "run verification suites");
    add_common(vf, o);
    vf->add_option("--suite", o.suite, "symmetry, misiurewicz, disk, boettcher, shift, center, parabolic, ray or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (*rd) return cmd_render(o, false);
        if (*rp) return cmd_render(o, true);
        if (*cs) return cmd_census(o);
        if (*tr) return cmd_trace_ray(o);
        if (*fd) return cmd_find(o);
        if (*sy) return cmd_symbol(o);
        if (*vf) return cmd_verify(o, vf->count("--p") > 0, vf->count("--q") > 0);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidConfig ? kExitInvalidConfig : kExitCheckFailed;
    }
    return kExitInvalidConfig;
}
