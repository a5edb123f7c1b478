#pragma once

#include <cstdint>
#include <vector>

namespace tanfam {

struct Labeling {
    std::vector<std::int32_t> labels; ///< row-major, -1 for cells excluded by the key
    std::int32_t count = 0;
};

/// 4-connected component labeling of a width x height grid. Cells with equal keys
/// are joined; cells whose key equals `skip` get label -1. Labels are assigned in
/// row-major order of each component's first cell.
template <class Key>
Labeling label_components(int width, int height, const std::vector<Key>& keys, const Key& skip) {
    Labeling out;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    out.labels.assign(n, -1);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (out.labels[start] >= 0 || keys[start] == skip) continue;
        const std::int32_t label = out.count++;
        const Key key = keys[start];
        out.labels[start] = label;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(c % width);
            const int y = static_cast<int>(c / width);
            auto visit = [&](int nx, int ny) {
                if (nx < 0 || ny < 0 || nx >= width || ny >= height) return;
                const std::size_t nc = static_cast<std::size_t>(ny) * width + nx;
                if (out.labels[nc] >= 0 || !(keys[nc] == key)) return;
                out.labels[nc] = label;
                stack.push_back(nc);
            };
            visit(x - 1, y);
            visit(x + 1, y);
            visit(x, y - 1);
            visit(x, y + 1);
        }
    }
    return out;
}

} // namespace tanfam
