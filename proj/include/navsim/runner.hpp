#pragma once

#include <functional>
#include <string>
#include <vector>

#include "navsim/episode.hpp"
#include "navsim/eval.hpp"
#include "navsim/io.hpp"

namespace navsim::runner {

struct WorldBundle {
    worldgen::TileCatalog catalog;
    worldgen::TileMap map;
    terrain::HeightField field;
    navgraph::NavGraph graph;
};

WorldBundle generate_world(const io::RunConfig& cfg);

void save_world(const WorldBundle& w, const io::RunConfig& cfg, const std::string& out_dir);
WorldBundle load_world(const std::string& dir);

struct RolloutResult {
    std::vector<episode::StepRecord> records;
    eval::EpisodeResult result;
    std::vector<Vec2> commands;       // hl commands (vx, vy body frame)
    std::vector<Vec2> realized;       // realized body velocities
};

// Closed-loop rollout of the scripted pure-pursuit policy.
RolloutResult run_scripted_episode(const WorldBundle& world, const io::RunConfig& cfg,
                                   uint64_t episode_seed);

// Deterministic for any thread count: per-episode seeds derive from the base
// seed and index, results merge in index order.
std::vector<RolloutResult> rollout_batch(const WorldBundle& world, const io::RunConfig& cfg,
                                         int episodes, uint64_t base_seed, int threads = 1);

io::json metrics_report(const std::vector<RolloutResult>& rollouts, const io::RunConfig& cfg);
std::string metrics_csv(const std::vector<RolloutResult>& rollouts);

// One curriculum evaluation: proxy rollouts over a stair strip built from the
// candidate parameters, scored by velocity tracking.
std::vector<double> evaluate_terrain_params(const terrain::TerrainParams& params,
                                            const io::RunConfig& cfg, uint64_t seed,
                                            int rollouts);

struct CurriculumGeneration {
    int generation = 0;
    std::vector<terrain::CurriculumRecord> population;
};

// Full MC-filter loop; re-seeds from uniform sampling when every record has
// zero fitness, up to `reseed_budget` times.
std::vector<CurriculumGeneration> filter_terrain(const io::RunConfig& cfg, int generations,
                                                 int reseed_budget = 5);

}  // namespace navsim::runner
