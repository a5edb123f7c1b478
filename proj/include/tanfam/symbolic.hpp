#pragma once

// Symbolic coding of prepoles in the shift locus. A finite itinerary
// b_1 b_2 ... b_d of inverse-branch indices names the point
//
//   Xi(b_1 ... b_d) = inv_{b_1}( inv_{b_2}( ... inv_{b_{d-1}}( pole(b_d) ) ... ) ),
//
// so that f(Xi(s)) = Xi(sigma s). The last symbol names a pole through
// branch_pole(q, k, j); its l is 0 by convention.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "tanfam/complex.hpp"
#include "tanfam/error.hpp"
#include "tanfam/family.hpp"
#include "tanfam/orbit.hpp"

namespace tanfam {

inline constexpr int kDefaultAlphabet = 3;

struct Itinerary {
    std::vector<BranchIndex> symbols;

    std::size_t depth() const { return symbols.size(); }
    Itinerary tail() const { return {{symbols.begin() + 1, symbols.end()}}; }
    friend bool operator==(const Itinerary&, const Itinerary&) = default;
};

/// "k,j,l;k,j,l;..." (l may be omitted).
inline Itinerary parse_itinerary(const std::string& text) {
    Itinerary it;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(';', pos), text.size());
        const std::string item = text.substr(pos, end - pos);
        if (!item.empty()) {
            long long k = 0;
            int j = 0;
            int l = 0;
            const int got = std::sscanf(item.c_str(), "%lld,%d,%d", &k, &j, &l);
            if (got < 2) throw Error(ErrorKind::InvalidConfig, "itinerary symbols are k,j[,l]");
            it.symbols.push_back({k, j, got == 3 ? l : 0});
        }
        pos = end + 1;
    }
    if (it.symbols.empty()) throw Error(ErrorKind::InvalidConfig, "empty itinerary");
    return it;
}

inline std::string format_itinerary(const Itinerary& it) {
    std::string out;
    for (std::size_t i = 0; i < it.symbols.size(); ++i) {
        if (i) out += ';';
        const auto& b = it.symbols[i];
        out += std::to_string(b.k) + ',' + std::to_string(b.j) + ',' + std::to_string(b.l);
    }
    return out;
}

namespace detail {

inline void check_symbol(const Family& f, const BranchIndex& b, int k_max) {
    if (std::llabs(b.k) > k_max) throw Error(ErrorKind::AlphabetOverflow, "symbol k outside the alphabet");
    if (b.j < 0 || b.j >= f.q() || b.l < 0 || b.l >= f.p())
        throw Error(ErrorKind::InvalidConfig, "symbol sheet index out of range");
}

inline Complex pull_back(const Family& f, Complex w, const BranchIndex& b) {
    try {
        return inverse_branch(f, w, b);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularValue || e.kind() == ErrorKind::BranchUndefined)
            throw Error(ErrorKind::SingularValueHit, "inverse branch met a singular value");
        throw;
    }
}

} // namespace detail

inline Complex prepole_from_itinerary(const Family& f, const Itinerary& it, int k_max = kDefaultAlphabet) {
    if (it.symbols.empty()) throw Error(ErrorKind::InvalidConfig, "empty itinerary");
    for (const auto& b : it.symbols) detail::check_symbol(f, b, k_max);
    const BranchIndex& last = it.symbols.back();
    Complex z = branch_pole(f.q(), last.k, last.j);
    for (std::size_t i = it.symbols.size() - 1; i-- > 0;) z = detail::pull_back(f, z, it.symbols[i]);
    return z;
}

namespace detail {

inline int wrap(long long v, int n) { return static_cast<int>(((v % n) + n) % n); }

// The symbol of a pole z: z^q = k pi + pi/2 on sheet j.
inline BranchIndex pole_symbol(const Family& f, Complex z) {
    const Complex s = ipow(z, f.q());
    const auto k = static_cast<std::int64_t>(std::llround((s.real() - pi / 2) / pi));
    const Complex base = principal_root(Complex{static_cast<double>(k) * pi + pi / 2, 0.0}, f.q());
    const int j = wrap(std::llround(f.q() * std::arg(z / base) / (2.0 * pi)), f.q());
    return {k, j, 0};
}

// Branches b with inverse_branch(f(z), b) = z, searched around the strip read off Re z^q.
// Several survive only on a branch cut; the best match comes first.
inline std::vector<BranchIndex> branch_candidates(const Family& f, Complex z, Complex fz) {
    const Complex s = ipow(z, f.q());
    const auto k0 = static_cast<std::int64_t>(std::llround(s.real() / pi));
    std::vector<std::pair<double, BranchIndex>> found;
    for (std::int64_t k = k0 - 1; k <= k0 + 1; ++k)
        for (int j = 0; j < f.q(); ++j)
            for (int l = 0; l < f.p(); ++l) {
                const BranchIndex b{k, j, l};
                try {
                    found.push_back({std::abs(inverse_branch(f, fz, b) - z), b});
                } catch (const Error&) {
                }
            }
    if (found.empty()) throw Error(ErrorKind::SingularValueHit, "no inverse branch reproduces the point");
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const double tie = std::max(1e-4 * (1.0 + std::abs(z)), 4.0 * found.front().first);
    std::vector<BranchIndex> out;
    for (const auto& [gap, b] : found)
        if (gap <= tie) out.push_back(b);
    return out;
}

inline constexpr std::size_t kMaxCodeCombinations = 256;

} // namespace detail

/// Reads symbols along the forward orbit of z for up to `depth` steps. The orbit ends
/// early at a pole (|f| > 1e6 or at-infinity) and the symbol at step `depth` always names
/// a pole. Points on a branch cut admit several codes; the one whose prepole lies
/// closest to z is returned.
inline Itinerary itinerary_from_point(const Family& f, Complex z, int depth) {
    if (depth < 1) throw Error(ErrorKind::InvalidConfig, "depth must be >= 1");
    const double trap = trap_radius(f);
    std::vector<std::vector<BranchIndex>> choices;
    Complex w = z;
    for (int i = 0; i < depth; ++i) {
        if (std::abs(w) < trap) throw Error(ErrorKind::LeftCantorRegion, "orbit entered the basin of 0");
        const Extended fw = eval(f, w);
        if (i + 1 == depth || fw.at_infinity || std::abs(fw.value) > 1e6) {
            choices.push_back({detail::pole_symbol(f, w)});
            break;
        }
        choices.push_back(detail::branch_candidates(f, w, fw.value));
        w = fw.value;
    }
    std::size_t combos = 1;
    for (const auto& c : choices) combos = std::min(combos * c.size(), detail::kMaxCodeCombinations);
    Itinerary best;
    for (const auto& c : choices) best.symbols.push_back(c.front());
    if (combos == 1) return best;
    double best_gap = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(choices.size(), 0);
    for (std::size_t n = 0; n < combos; ++n) {
        Itinerary it;
        for (std::size_t i = 0; i < choices.size(); ++i) it.symbols.push_back(choices[i][pick[i]]);
        try {
            const double gap = std::abs(prepole_from_itinerary(f, it, std::numeric_limits<int>::max()) - z);
            if (gap < best_gap) {
                best_gap = gap;
                best = std::move(it);
            }
        } catch (const Error&) {
        }
        for (std::size_t i = choices.size(); i-- > 0;) {
            if (++pick[i] < choices[i].size()) break;
            pick[i] = 0;
        }
    }
    return best;
}

struct ShiftReport {
    int depth = 0;
    int k_max = 0;
    std::size_t count = 0;          ///< itineraries checked (depth >= 2 carry a shift relation)
    double max_residual = 0.0;      ///< max |f(Xi(s)) - Xi(sigma s)|
    double max_roundtrip = 0.0;     ///< max |Xi(code(Xi(s))) - Xi(s)|
    std::size_t code_mismatches = 0; ///< itineraries not recovered symbol for symbol
    std::size_t singular_hits = 0;
    double min_separation = 0.0;    ///< smallest distance between distinct points at full depth
    /// Per depth d >= 2: max over prefixes s of |Xi_s'| times the spread of the poles, where
    /// Xi_s is the composed inverse branch with Xi(s b) = Xi_s(pole(b)).
    std::vector<double> sibling_diameter;
    double max_ratio = 0.0;         ///< max of consecutive sibling_diameter ratios
    bool slow_contraction = false;  ///< max_ratio > 0.5 (siblings shrink by less than 2 per level)
};

/// Enumerates every itinerary up to `depth` with |k| <= k_max and checks the shift
/// relation, the codec round trip and the contraction of sibling sets.
inline ShiftReport verify_shift_conjugacy(const Family& f, int depth, int k_max = kDefaultAlphabet) {
    if (depth < 1 || k_max < 0) throw Error(ErrorKind::InvalidConfig, "depth >= 1 and k_max >= 0 required");
    ShiftReport rep;
    rep.depth = depth;
    rep.k_max = k_max;
    struct Node {
        Complex z;
        double shrink; // |(f^(d-1))'(z)|^(-1)
        std::vector<BranchIndex> code;
    };
    std::vector<BranchIndex> firsts;
    for (long long k = -k_max; k <= k_max; ++k)
        for (int j = 0; j < f.q(); ++j)
            for (int l = 0; l < f.p(); ++l) firsts.push_back({k, j, l});

    std::vector<Node> level;
    for (long long k = -k_max; k <= k_max; ++k)
        for (int j = 0; j < f.q(); ++j) level.push_back({branch_pole(f.q(), k, j), 1.0, {{k, j, 0}}});
    rep.count = level.size();
    double pole_spread = 0.0;
    for (const Node& a : level)
        for (const Node& b : level) pole_spread = std::max(pole_spread, std::abs(a.z - b.z));

    auto check_codec = [&](const std::vector<Node>& nodes) {
        for (const Node& n : nodes) {
            try {
                const Itinerary code = itinerary_from_point(f, n.z, static_cast<int>(n.code.size()));
                if (!(code.symbols == n.code)) ++rep.code_mismatches;
                const Complex back = prepole_from_itinerary(f, code, std::max<int>(k_max, 64));
                rep.max_roundtrip = std::max(rep.max_roundtrip, std::abs(back - n.z));
            } catch (const Error&) {
                ++rep.code_mismatches;
            }
        }
    };
    check_codec(level);

    for (int d = 2; d <= depth; ++d) {
        std::vector<Node> next;
        next.reserve(level.size() * firsts.size());
        double widest = 0.0;
        for (std::size_t i = 0; i < level.size(); ++i) {
            for (const BranchIndex& b : firsts) {
                Complex z;
                try {
                    z = detail::pull_back(f, level[i].z, b);
                } catch (const Error&) {
                    ++rep.singular_hits;
                    continue;
                }
                const Extended fz = eval(f, z);
                const double r = fz.at_infinity ? std::numeric_limits<double>::infinity() : std::abs(fz.value - level[i].z);
                rep.max_residual = std::max(rep.max_residual, r);
                const Extended dz = eval_derivative(f, z);
                const double shrink = dz.at_infinity ? 0.0 : level[i].shrink / std::abs(dz.value);
                widest = std::max(widest, shrink);
                std::vector<BranchIndex> code{b};
                code.insert(code.end(), level[i].code.begin(), level[i].code.end());
                next.push_back({z, shrink, std::move(code)});
            }
        }
        rep.count += next.size();
        check_codec(next);
        rep.sibling_diameter.push_back(widest * pole_spread);
        level = std::move(next);
    }
    for (std::size_t i = 1; i < rep.sibling_diameter.size(); ++i)
        if (rep.sibling_diameter[i - 1] > 0.0)
            rep.max_ratio = std::max(rep.max_ratio, rep.sibling_diameter[i] / rep.sibling_diameter[i - 1]);
    rep.slow_contraction = rep.max_ratio > 0.5;

    std::vector<Complex> pts;
    for (const Node& n : level) pts.push_back(n.z);
    std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    rep.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = i + 1; k < pts.size() && pts[k].real() - pts[i].real() < rep.min_separation; ++k)
            rep.min_separation = std::min(rep.min_separation, std::abs(pts[k] - pts[i]));
    return rep;
}

} // namespace tanfam
