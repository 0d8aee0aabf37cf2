#include "navsim/worldgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <tuple>

#include "navsim/errors.hpp"

namespace navsim::worldgen {

const char* category_name(TileCategory c) {
    switch (c) {
        case TileCategory::StairX: return "StairX";
        case TileCategory::StairY: return "StairY";
        case TileCategory::Floor0: return "Floor0";
        case TileCategory::Floor1: return "Floor1";
        case TileCategory::Obstacle: return "Obstacle";
    }
    return "?";
}

TileCategory category_from_name(const std::string& name) {
    if (name == "StairX") return TileCategory::StairX;
    if (name == "StairY") return TileCategory::StairY;
    if (name == "Floor0") return TileCategory::Floor0;
    if (name == "Floor1") return TileCategory::Floor1;
    if (name == "Obstacle") return TileCategory::Obstacle;
    throw Error("unknown tile category: " + name);
}

void TileCatalog::resize_masks() {
    masks_.assign(kinds.size() * 4, 0);
}

// layout: [kind_idx * 4 + axis * 2 + dir]
uint64_t TileCatalog::neighbor_mask(int kind_idx, Axis axis, bool positive_dir) const {
    return masks_[static_cast<size_t>(kind_idx) * 4 + static_cast<int>(axis) * 2 +
                  (positive_dir ? 1 : 0)];
}

int TileCatalog::kind_index(int id) const {
    for (size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i].id == id) return static_cast<int>(i);
    return -1;
}

bool TileCatalog::allowed(int kind_a, int kind_b, Axis axis) const {
    const int ia = kind_index(kind_a);
    const int ib = kind_index(kind_b);
    if (ia < 0) throw UnknownKindId(kind_a);
    if (ib < 0) throw UnknownKindId(kind_b);
    return (neighbor_mask(ia, axis, true) >> ib) & 1u;
}

void TileCatalog::allow(int kind_a, int kind_b, Axis axis) {
    const int ia = kind_index(kind_a);
    const int ib = kind_index(kind_b);
    if (ia < 0) throw UnknownKindId(kind_a);
    if (ib < 0) throw UnknownKindId(kind_b);
    const int ax = static_cast<int>(axis);
    masks_[static_cast<size_t>(ia) * 4 + ax * 2 + 1] |= 1ull << ib;
    masks_[static_cast<size_t>(ib) * 4 + ax * 2 + 0] |= 1ull << ia;
    // symmetric under swapping (A,B) with axis preserved
    masks_[static_cast<size_t>(ib) * 4 + ax * 2 + 1] |= 1ull << ia;
    masks_[static_cast<size_t>(ia) * 4 + ax * 2 + 0] |= 1ull << ib;
}

std::vector<std::tuple<int, int, Axis>> TileCatalog::allowed_pairs() const {
    std::vector<std::tuple<int, int, Axis>> out;
    for (size_t a = 0; a < kinds.size(); ++a)
        for (size_t b = 0; b < kinds.size(); ++b)
            for (int ax = 0; ax < 2; ++ax)
                if ((neighbor_mask(static_cast<int>(a), static_cast<Axis>(ax), true) >> b) & 1u)
                    out.emplace_back(static_cast<int>(a), static_cast<int>(b),
                                     static_cast<Axis>(ax));
    return out;
}

TileCatalog build_tile_catalog(const std::vector<std::vector<int>>& example,
                               const std::vector<TileKind>& kinds, int pattern_size) {
    if (example.empty() || example[0].empty()) throw EmptyExample();
    const int h = static_cast<int>(example.size());
    const int w = static_cast<int>(example[0].size());
    // a single-row (or single-column) example still defines adjacency along
    // its long axis, so only reject patterns larger than both dimensions
    if (pattern_size < 1 || pattern_size > std::max(w, h)) throw PatternTooLarge();
    if (kinds.size() > 64) throw Error("tile catalogs are limited to 64 kinds");

    TileCatalog cat;
    cat.kinds = kinds;
    cat.pattern_size = pattern_size;
    cat.weights.assign(kinds.size(), 0.0);
    cat.resize_masks();

    for (int y = 0; y < h; ++y) {
        if (static_cast<int>(example[y].size()) != w) throw Error("ragged example grid");
        for (int x = 0; x < w; ++x) {
            const int id = example[y][x];
            const int idx = cat.kind_index(id);
            if (idx < 0) throw UnknownKindId(id);
            cat.weights[idx] += 1.0;
            if (x + 1 < w) cat.allow(id, example[y][x + 1], Axis::X);
            if (y + 1 < h) cat.allow(id, example[y + 1][x], Axis::Y);
        }
    }
    return cat;
}

namespace {

// One collapse attempt over the full grid; restart on contradiction.
class Solver {
public:
    Solver(const TileCatalog& cat, int width, int height)
        : cat_(cat), w_(width), h_(height), n_(cat.num_kinds()) {
        full_ = n_ >= 64 ? ~0ull : ((1ull << n_) - 1);
    }

    bool solve(Rng& rng, TileMap& out) {
        domains_.assign(static_cast<size_t>(w_) * h_, full_);
        std::vector<size_t> open;
        while (true) {
            // pick the minimum-entropy undecided cell, noise tie-break
            int best = -1;
            double best_key = 1e300;
            for (size_t i = 0; i < domains_.size(); ++i) {
                const int count = std::popcount(domains_[i]);
                if (count <= 1) continue;
                const double key = entropy(domains_[i]) + rng.uniform() * 1e-6;
                if (key < best_key) {
                    best_key = key;
                    best = static_cast<int>(i);
                }
            }
            if (best < 0) break;  // all decided

            const int pick = pick_weighted(domains_[best], rng);
            domains_[best] = 1ull << pick;
            if (!propagate(best)) return false;
        }
        out.width = w_;
        out.height = h_;
        out.cells.resize(domains_.size());
        for (size_t i = 0; i < domains_.size(); ++i) {
            if (domains_[i] == 0) return false;
            out.cells[i] = cat_.kinds[std::countr_zero(domains_[i])].id;
        }
        return true;
    }

private:
    double entropy(uint64_t mask) const {
        double total = 0.0, sum_wlogw = 0.0;
        for (uint64_t m = mask; m; m &= m - 1) {
            const double wgt = std::max(cat_.weights[std::countr_zero(m)], 1e-12);
            total += wgt;
            sum_wlogw += wgt * std::log(wgt);
        }
        return std::log(total) - sum_wlogw / total;
    }

    int pick_weighted(uint64_t mask, Rng& rng) const {
        double total = 0.0;
        for (uint64_t m = mask; m; m &= m - 1)
            total += std::max(cat_.weights[std::countr_zero(m)], 1e-12);
        double r = rng.uniform() * total;
        int last = 0;
        for (uint64_t m = mask; m; m &= m - 1) {
            const int k = std::countr_zero(m);
            last = k;
            r -= std::max(cat_.weights[k], 1e-12);
            if (r <= 0.0) return k;
        }
        return last;
    }

    bool propagate(int start) {
        stack_.clear();
        stack_.push_back(start);
        while (!stack_.empty()) {
            const int cell = stack_.back();
            stack_.pop_back();
            const int cx = cell % w_, cy = cell / w_;
            static constexpr int dx[4] = {1, -1, 0, 0};
            static constexpr int dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const int nx = cx + dx[d], ny = cy + dy[d];
                if (nx < 0 || nx >= w_ || ny < 0 || ny >= h_) continue;
                const size_t ni = static_cast<size_t>(ny) * w_ + nx;
                const Axis axis = d < 2 ? Axis::X : Axis::Y;
                const bool positive = d == 0 || d == 2;
                // union of allowed neighbors over the cell's remaining domain
                uint64_t support = 0;
                for (uint64_t m = domains_[static_cast<size_t>(cell)]; m; m &= m - 1)
                    support |= cat_.neighbor_mask(std::countr_zero(m), axis, positive);
                const uint64_t pruned = domains_[ni] & support;
                if (pruned != domains_[ni]) {
                    if (pruned == 0) return false;
                    domains_[ni] = pruned;
                    stack_.push_back(static_cast<int>(ni));
                }
            }
        }
        return true;
    }

    const TileCatalog& cat_;
    int w_, h_;
    size_t n_;
    uint64_t full_;
    std::vector<uint64_t> domains_;
    std::vector<int> stack_;
};

}  // namespace

TileMap wfc_generate(const TileCatalog& catalog, int width, int height, uint64_t seed,
                     int max_restarts) {
    if (width < 1 || height < 1) throw Error("map dimensions must be >= 1");
    if (catalog.num_kinds() == 0) throw Error("catalog has no kinds");
    Solver solver(catalog, width, height);
    for (int attempt = 0; attempt <= max_restarts; ++attempt) {
        Rng rng(seed + 0x632be59bd9b4e019ull * static_cast<uint64_t>(attempt));
        TileMap map;
        if (solver.solve(rng, map)) {
            map.seed = seed;
            return map;
        }
    }
    throw ContradictionAfterRetries(max_restarts);
}

std::vector<AdjacencyViolation> validate_adjacency(const TileMap& map, const TileCatalog& catalog) {
    std::vector<AdjacencyViolation> out;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const int id = map.at(x, y);
            if (catalog.kind_index(id) < 0) throw UnknownKindId(id);
            if (x + 1 < map.width && !catalog.allowed(id, map.at(x + 1, y), Axis::X))
                out.push_back({x, y, x + 1, y, Axis::X});
            if (y + 1 < map.height && !catalog.allowed(id, map.at(x, y + 1), Axis::Y))
                out.push_back({x, y, x, y + 1, Axis::Y});
        }
    }
    return out;
}

std::vector<std::vector<int>> parse_example_grid(const std::string& text) {
    std::vector<std::vector<int>> grid;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream cells(line);
        std::vector<int> row;
        int v;
        while (cells >> v) row.push_back(v);
        if (!row.empty()) grid.push_back(std::move(row));
    }
    if (grid.empty()) throw EmptyExample();
    return grid;
}

}  // namespace navsim::worldgen
