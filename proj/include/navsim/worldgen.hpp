#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "navsim/rng.hpp"

namespace navsim::worldgen {

enum class TileCategory { StairX, StairY, Floor0, Floor1, Obstacle };

const char* category_name(TileCategory c);
TileCategory category_from_name(const std::string& name);

struct TileKind {
    int id = 0;
    TileCategory category = TileCategory::Floor0;
    int params_slot = 0;
};

// Adjacency axis: 0 = x (cell and its +x neighbor), 1 = y.
enum class Axis : int { X = 0, Y = 1 };

// Adjacency + frequency model extracted from an example grid.
// Pair-level model (pattern_size = 2): a pair (a, b, axis) is allowed iff it
// was observed in the example or explicitly injected.
class TileCatalog {
public:
    std::vector<TileKind> kinds;
    int pattern_size = 2;
    std::vector<double> weights;  // per-kind occurrence counts in the example

    bool allowed(int kind_a, int kind_b, Axis axis) const;
    void allow(int kind_a, int kind_b, Axis axis);  // rule injection, symmetric
    int kind_index(int id) const;                   // -1 if unknown
    size_t num_kinds() const { return kinds.size(); }

    // (a_idx, b_idx, axis) triples, indices into `kinds`
    std::vector<std::tuple<int, int, Axis>> allowed_pairs() const;

    void resize_masks();
    uint64_t neighbor_mask(int kind_idx, Axis axis, bool positive_dir) const;

private:
    // bitmask per (kind index, axis, direction): allowed neighbor kinds
    std::vector<uint64_t> masks_;
};

struct TileMap {
    int width = 0;
    int height = 0;
    std::vector<int> cells;  // row-major kind ids
    uint64_t seed = 0;

    int at(int x, int y) const { return cells[static_cast<size_t>(y) * width + x]; }
    int& at(int x, int y) { return cells[static_cast<size_t>(y) * width + x]; }
};

struct AdjacencyViolation {
    int ax, ay;  // cell A
    int bx, by;  // cell B (the +axis neighbor)
    Axis axis;
};

// example: row-major grid of kind ids; kinds: the kind table (categories).
// Adjacency = exactly the pairs observed in the example; weights = counts.
TileCatalog build_tile_catalog(const std::vector<std::vector<int>>& example,
                               const std::vector<TileKind>& kinds,
                               int pattern_size = 2);

// Minimum-entropy WFC with full-restart contradiction handling.
// Deterministic given (catalog, dims, seed).
TileMap wfc_generate(const TileCatalog& catalog, int width, int height, uint64_t seed,
                     int max_restarts = 100);

std::vector<AdjacencyViolation> validate_adjacency(const TileMap& map, const TileCatalog& catalog);

// Plain-text grid of kind ids (whitespace separated rows).
std::vector<std::vector<int>> parse_example_grid(const std::string& text);

}  // namespace navsim::worldgen
