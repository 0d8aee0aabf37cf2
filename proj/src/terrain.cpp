#include "navsim/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "navsim/errors.hpp"

namespace navsim::terrain {

double TerrainParams::get(int i) const {
    switch (i) {
        case 0: return step_height;
        case 1: return step_depth;
        case 2: return roughness_amp;
        case 3: return correlation_len;
        case 4: return friction;
        case 5: return slope;
    }
    throw Error("bad parameter index");
}

void TerrainParams::set(int i, double v) {
    switch (i) {
        case 0: step_height = v; return;
        case 1: step_depth = v; return;
        case 2: roughness_amp = v; return;
        case 3: correlation_len = v; return;
        case 4: friction = v; return;
        case 5: slope = v; return;
    }
    throw Error("bad parameter index");
}

ParamSpace ParamSpace::defaults() {
    ParamSpace s{};
    // step_height, step_depth, roughness_amp, correlation_len, friction, slope
    const double lo[] = {0.05, 0.20, 0.00, 0.20, 0.40, 0.00};
    const double hi[] = {0.25, 0.45, 0.08, 2.00, 1.20, 0.20};
    std::copy(std::begin(lo), std::end(lo), s.lo);
    std::copy(std::begin(hi), std::end(hi), s.hi);
    return s;
}

bool HeightField::contains(const Vec2& world) const {
    const Vec2 local = world - origin;
    const double ix = local.x / resolution, iy = local.y / resolution;
    return ix >= -0.5 && iy >= -0.5 && ix < width - 0.5 && iy < height - 0.5;
}

double HeightField::sample(const Vec2& world) const {
    const Vec2 local = world - origin;
    int ix = static_cast<int>(std::lround(local.x / resolution));
    int iy = static_cast<int>(std::lround(local.y / resolution));
    ix = std::clamp(ix, 0, width - 1);
    iy = std::clamp(iy, 0, height - 1);
    return at(ix, iy);
}

double HeightField::friction_at(const Vec2& world) const {
    const Vec2 local = world - origin;
    int ix = static_cast<int>(std::lround(local.x / resolution));
    int iy = static_cast<int>(std::lround(local.y / resolution));
    ix = std::clamp(ix, 0, width - 1);
    iy = std::clamp(iy, 0, height - 1);
    return friction[static_cast<size_t>(iy) * width + ix];
}

namespace {

uint64_t hash_cell(int64_t ix, int64_t iy, uint64_t seed) {
    uint64_t h = seed;
    h ^= static_cast<uint64_t>(ix) * 0x9e3779b97f4a7c15ull;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h ^= static_cast<uint64_t>(iy) * 0xc2b2ae3d27d4eb4full;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
}

double lattice_value(int64_t ix, int64_t iy, uint64_t seed) {
    // in [-1, 1]
    return static_cast<double>(hash_cell(ix, iy, seed) >> 11) * 0x1.0p-52 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

constexpr double kObstacleWallHeight = 1.5;  // m

}  // namespace

double value_noise(double x, double y, double correlation_len, uint64_t seed) {
    const double pitch = std::max(correlation_len, 1e-6);
    const double gx = x / pitch, gy = y / pitch;
    const auto ix = static_cast<int64_t>(std::floor(gx));
    const auto iy = static_cast<int64_t>(std::floor(gy));
    const double tx = smoothstep(gx - static_cast<double>(ix));
    const double ty = smoothstep(gy - static_cast<double>(iy));
    const double v00 = lattice_value(ix, iy, seed);
    const double v10 = lattice_value(ix + 1, iy, seed);
    const double v01 = lattice_value(ix, iy + 1, seed);
    const double v11 = lattice_value(ix + 1, iy + 1, seed);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * ty;
}

namespace {

using worldgen::TileCategory;
using worldgen::TileMap;

int stair_steps(const TerrainParams& p, double tile_edge) {
    return std::max(1, static_cast<int>(std::lround(tile_edge / p.step_depth)));
}

TileCategory category_at(const TileMap& map, const worldgen::TileCatalog& cat, int tx, int ty) {
    const int idx = cat.kind_index(map.at(tx, ty));
    return cat.kinds[static_cast<size_t>(idx)].category;
}

}  // namespace

double stair_rise(const TerrainParams& params, double tile_edge) {
    return stair_steps(params, tile_edge) * params.step_height;
}

double tile_base_elevation(TileCategory cat, const TerrainParams& params, double tile_edge) {
    switch (cat) {
        case TileCategory::Floor0: return 0.0;
        case TileCategory::Floor1: return stair_rise(params, tile_edge);
        case TileCategory::StairX:
        case TileCategory::StairY: return 0.5 * stair_rise(params, tile_edge);
        case TileCategory::Obstacle: return 0.0;
    }
    return 0.0;
}

HeightField synthesize_height_field(const TileMap& map, const worldgen::TileCatalog& catalog,
                                    const TerrainParams& params, double resolution,
                                    double tile_edge) {
    const double ratio = tile_edge / resolution;
    if (std::abs(ratio - std::lround(ratio)) > 1e-9) throw ResolutionMismatch();
    const int cpt = static_cast<int>(std::lround(ratio));

    HeightField f;
    f.resolution = resolution;
    f.origin = {0.5 * resolution, 0.5 * resolution};
    f.width = map.width * cpt;
    f.height = map.height * cpt;
    f.data.assign(static_cast<size_t>(f.width) * f.height, 0.0f);
    f.friction.assign(f.data.size(), static_cast<float>(params.friction));

    const int steps = stair_steps(params, tile_edge);
    const double rise = steps * params.step_height;
    const double slope_tan = std::tan(params.slope);

    auto floor_level = [&](int tx, int ty) -> double {
        if (tx < 0 || tx >= map.width || ty < 0 || ty >= map.height) return 0.0;
        switch (category_at(map, catalog, tx, ty)) {
            case TileCategory::Floor1: return rise;
            case TileCategory::StairX:
            case TileCategory::StairY: return 0.5 * rise;
            default: return 0.0;
        }
    };

    for (int ty = 0; ty < map.height; ++ty) {
        for (int tx = 0; tx < map.width; ++tx) {
            const TileCategory cat = category_at(map, catalog, tx, ty);
            const bool is_stair_x = cat == TileCategory::StairX;
            const bool is_stair_y = cat == TileCategory::StairY;
            const bool is_floor = cat == TileCategory::Floor0 || cat == TileCategory::Floor1;

            // stair spans whatever its axis neighbors actually are: full rise
            // between Floor0 and Floor1, flat if both sides sit at one level
            double h_lo = 0.0, h_hi = rise;
            bool ascend_positive = true;
            if (is_stair_x || is_stair_y) {
                const double neg = is_stair_x ? floor_level(tx - 1, ty) : floor_level(tx, ty - 1);
                const double pos = is_stair_x ? floor_level(tx + 1, ty) : floor_level(tx, ty + 1);
                ascend_positive = pos >= neg;
                h_lo = std::min(neg, pos);
                h_hi = std::max(neg, pos);
            }

            for (int cy = 0; cy < cpt; ++cy) {
                for (int cx = 0; cx < cpt; ++cx) {
                    const int ix = tx * cpt + cx;
                    const int iy = ty * cpt + cy;
                    const double wx = f.origin.x + ix * resolution;
                    const double wy = f.origin.y + iy * resolution;

                    double h = 0.0;
                    if (is_stair_x || is_stair_y) {
                        double u = is_stair_x ? (cx + 0.5) * resolution : (cy + 0.5) * resolution;
                        if (!ascend_positive) u = tile_edge - u;
                        int tread = static_cast<int>(std::floor(u / params.step_depth));
                        tread = std::clamp(tread, 0, steps - 1);
                        h = h_lo + tread * (h_hi - h_lo) / steps;
                    } else if (is_floor) {
                        h = cat == TileCategory::Floor1 ? rise : 0.0;
                        if (params.roughness_amp > 0.0) {
                            const double n =
                                value_noise(wx, wy, params.correlation_len, map.seed);
                            h += clamp(n, -1.0, 1.0) * params.roughness_amp;
                        }
                    } else {  // Obstacle: wall above the surrounding floor
                        h = kObstacleWallHeight;
                    }
                    h += slope_tan * wx;
                    f.at(ix, iy) = static_cast<float>(h);
                }
            }
        }
    }
    return f;
}

TerrainParams sample_terrain_params(const ParamSpace& space, Rng& rng) {
    TerrainParams p;
    for (int i = 0; i < TerrainParams::kNumParams; ++i) {
        if (space.lo[i] > space.hi[i]) throw EmptySpace();
        p.set(i, space.lo[i] == space.hi[i] ? space.lo[i]
                                            : rng.uniform(space.lo[i], space.hi[i]));
    }
    return p;
}

double traversal_score(const std::vector<Vec2>& realized_velocities, const Vec2& command) {
    if (realized_velocities.empty()) throw EmptyTrajectory();
    double err = 0.0;
    for (const Vec2& v : realized_velocities) err += (v - command).norm();
    err /= static_cast<double>(realized_velocities.size());
    return err < 0.2 * command.norm() ? 1.0 : 0.0;
}

double curriculum_fitness(const std::vector<double>& scores, double t_l, double t_h) {
    if (!(0.0 <= t_l && t_l < t_h && t_h <= 1.0)) throw BadThresholds();
    if (scores.empty()) throw BadThresholds();
    const double mean =
        std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    return (t_l < mean && mean < t_h) ? mean : 0.0;
}

std::vector<CurriculumRecord> evolve_params(const std::vector<CurriculumRecord>& population,
                                            const ParamSpace& space, double elite_frac,
                                            double mutation_scale, Rng& rng) {
    if (population.empty()) throw Error("empty population");

    std::vector<int> parents;
    for (size_t i = 0; i < population.size(); ++i)
        if (population[i].fitness > 0.0) parents.push_back(static_cast<int>(i));
    if (parents.empty()) throw AllZeroFitness();

    // elites: best positive-fitness records carried over unchanged
    std::vector<int> ranked = parents;
    std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
        if (population[a].fitness != population[b].fitness)
            return population[a].fitness > population[b].fitness;
        return a < b;
    });
    const size_t n_elite = std::min(
        ranked.size(),
        static_cast<size_t>(std::lround(elite_frac * static_cast<double>(population.size()))));

    std::vector<CurriculumRecord> next;
    next.reserve(population.size());
    for (size_t i = 0; i < n_elite; ++i) {
        CurriculumRecord r;
        r.params = population[static_cast<size_t>(ranked[i])].params;
        next.push_back(std::move(r));
    }

    while (next.size() < population.size()) {
        // tournament of 2 among positive-fitness records
        const int a = parents[rng.uniform_index(parents.size())];
        const int b = parents[rng.uniform_index(parents.size())];
        const int winner = population[static_cast<size_t>(a)].fitness >=
                                   population[static_cast<size_t>(b)].fitness
                               ? a
                               : b;
        CurriculumRecord child;
        child.params = population[static_cast<size_t>(winner)].params;
        for (int i = 0; i < TerrainParams::kNumParams; ++i) {
            const double range = space.hi[i] - space.lo[i];
            double v = child.params.get(i);
            if (mutation_scale > 0.0 && range > 0.0)
                v += rng.normal(0.0, mutation_scale * range);
            child.params.set(i, clamp(v, space.lo[i], space.hi[i]));
        }
        next.push_back(std::move(child));
    }
    return next;
}

}  // namespace navsim::terrain
