#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "navsim/episode.hpp"
#include "navsim/eval.hpp"
#include "navsim/navgraph.hpp"
#include "navsim/terrain.hpp"
#include "navsim/worldgen.hpp"

namespace navsim::io {

using nlohmann::json;

// ---- JSON codecs -----------------------------------------------------------

json catalog_to_json(const worldgen::TileCatalog& cat);
worldgen::TileCatalog catalog_from_json(const json& j);

json tilemap_to_json(const worldgen::TileMap& map);
worldgen::TileMap tilemap_from_json(const json& j);

json graph_to_json(const navgraph::NavGraph& g);
navgraph::NavGraph graph_from_json(const json& j);

json terrain_params_to_json(const terrain::TerrainParams& p);
terrain::TerrainParams terrain_params_from_json(const json& j);

json step_record_to_json(const episode::StepRecord& r);

json curriculum_record_to_json(const terrain::CurriculumRecord& r);

// ---- Height field raster ---------------------------------------------------

// data file: little-endian float32 raster; sidecar: JSON metadata.
void save_height_field(const terrain::HeightField& f, const std::string& raster_path,
                       const std::string& sidecar_path);
terrain::HeightField load_height_field(const std::string& raster_path,
                                       const std::string& sidecar_path);

// ---- Files -----------------------------------------------------------------

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Replay log: one JSON object per line, one line per hl-step.
std::string replay_to_jsonl(const std::vector<episode::StepRecord>& records);

// ---- Run configuration -----------------------------------------------------

struct RunConfig {
    int schema_version = 1;
    uint64_t seed = 0;
    int world_width = 16;
    int world_height = 16;
    double tile_edge = 2.0;
    double resolution = 0.1;
    std::string catalog_path;  // optional; empty = built-in example
    terrain::TerrainParams terrain_params;
    terrain::ParamSpace param_space = terrain::ParamSpace::defaults();
    double curriculum_t_l = 0.5;
    double curriculum_t_h = 0.9;
    int curriculum_population = 16;
    int curriculum_rollouts = 8;
    double elite_frac = 0.2;
    double mutation_scale = 0.1;
    episode::EpisodeConfig episode;
    rewards::RewardWeights weights;
    agent::ActuatorModel actuator;
    double eval_goal_radius = 0.5;
    double eval_budget_s = 60.0;
};

// Strict parse: unknown keys are rejected.
RunConfig run_config_from_json(const json& j);
json run_config_to_json(const RunConfig& cfg);

// Built-in example grid used when no catalog file is given: floors on both
// levels joined by stairs, with obstacle pockets.
std::vector<worldgen::TileKind> default_tile_kinds();
std::vector<std::vector<int>> default_example_grid();

}  // namespace navsim::io
