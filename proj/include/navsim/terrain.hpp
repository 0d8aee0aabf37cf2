#pragma once

#include <vector>

#include "navsim/geometry.hpp"
#include "navsim/rng.hpp"
#include "navsim/worldgen.hpp"

namespace navsim::terrain {

// Per-category terrain parameters (the curriculum's search variable).
struct TerrainParams {
    double step_height = 0.12;      // m, stair rise per step
    double step_depth = 0.25;       // m, stair run per step
    double roughness_amp = 0.02;    // m, floor noise amplitude
    double correlation_len = 0.5;   // m, floor noise correlation length
    double friction = 0.8;          // floor friction coefficient
    double slope = 0.0;             // rad, global tilt along +x

    static constexpr int kNumParams = 6;
    double get(int i) const;
    void set(int i, double v);
};

// Uniform bounds per parameter, in TerrainParams field order.
struct ParamSpace {
    double lo[TerrainParams::kNumParams];
    double hi[TerrainParams::kNumParams];

    static ParamSpace defaults();
};

struct HeightField {
    double resolution = 0.1;  // m per cell
    Vec2 origin;              // world xy of cell (0,0) center
    int width = 0;
    int height = 0;
    std::vector<float> data;      // row-major elevation, m
    std::vector<float> friction;  // per-cell friction coefficient

    float at(int ix, int iy) const { return data[static_cast<size_t>(iy) * width + ix]; }
    float& at(int ix, int iy) { return data[static_cast<size_t>(iy) * width + ix]; }

    // Nearest-cell height at a world position, clamped to field edges.
    double sample(const Vec2& world) const;
    double friction_at(const Vec2& world) const;
    bool contains(const Vec2& world) const;
};

struct CurriculumRecord {
    TerrainParams params;
    std::vector<double> scores;  // per-rollout traversal scores in [0,1]
    double fitness = 0.0;
};

// Raster synthesis from a tile map. Floor0 sits at slope-adjusted base 0,
// Floor1 one stair-rise above; stair tiles produce monotone staircases along
// their axis joining the neighboring floor elevations.
HeightField synthesize_height_field(const worldgen::TileMap& map,
                                    const worldgen::TileCatalog& catalog,
                                    const TerrainParams& params, double resolution,
                                    double tile_edge = 2.0);

// Elevation of a tile's reference floor level, used by graph building too.
double tile_base_elevation(worldgen::TileCategory cat, const TerrainParams& params,
                           double tile_edge);

// Total rise of one stair tile (= Floor1 - Floor0 elevation difference).
double stair_rise(const TerrainParams& params, double tile_edge);

TerrainParams sample_terrain_params(const ParamSpace& space, Rng& rng);

// 1.0 iff mean velocity-tracking error < 0.2 * command speed (strict).
double traversal_score(const std::vector<Vec2>& realized_velocities, const Vec2& command);

// Minimal-criterion fitness: mean(scores) iff strictly inside (t_l, t_h), else 0.
double curriculum_fitness(const std::vector<double>& scores, double t_l, double t_h);

// One GA generation: tournament selection among positive-fitness records,
// Gaussian mutation clipped to the space. Throws AllZeroFitness when no
// record qualifies as a parent.
std::vector<CurriculumRecord> evolve_params(const std::vector<CurriculumRecord>& population,
                                            const ParamSpace& space, double elite_frac,
                                            double mutation_scale, Rng& rng);

// Value noise used for floor roughness; exposed for tests.
double value_noise(double x, double y, double correlation_len, uint64_t seed);

}  // namespace navsim::terrain
