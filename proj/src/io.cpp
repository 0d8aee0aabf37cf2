#include "navsim/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "navsim/errors.hpp"

namespace navsim::io {

using worldgen::Axis;

// ---- catalogs / maps -------------------------------------------------------

json catalog_to_json(const worldgen::TileCatalog& cat) {
    json j;
    j["pattern_size"] = cat.pattern_size;
    j["kinds"] = json::array();
    for (const auto& k : cat.kinds)
        j["kinds"].push_back({{"id", k.id},
                              {"category", worldgen::category_name(k.category)},
                              {"params_slot", k.params_slot}});
    j["weights"] = cat.weights;
    j["adjacency"] = json::array();
    for (const auto& [a, b, axis] : cat.allowed_pairs())
        j["adjacency"].push_back(
            {{"a", cat.kinds[static_cast<size_t>(a)].id},
             {"b", cat.kinds[static_cast<size_t>(b)].id},
             {"axis", axis == Axis::X ? "x" : "y"}});
    return j;
}

worldgen::TileCatalog catalog_from_json(const json& j) {
    std::vector<worldgen::TileKind> kinds;
    for (const auto& k : j.at("kinds"))
        kinds.push_back({k.at("id").get<int>(),
                         worldgen::category_from_name(k.at("category").get<std::string>()),
                         k.value("params_slot", 0)});
    // rebuild through a degenerate example, then overwrite weights + adjacency
    worldgen::TileCatalog cat;
    if (kinds.empty()) throw ConfigError("catalog has no kinds");
    std::vector<std::vector<int>> seed_example{{kinds[0].id}};
    cat = worldgen::build_tile_catalog(seed_example, kinds, 1);
    cat.pattern_size = j.value("pattern_size", 2);
    cat.weights = j.at("weights").get<std::vector<double>>();
    if (cat.weights.size() != kinds.size()) throw ConfigError("weights/kinds size mismatch");
    for (const auto& p : j.at("adjacency"))
        cat.allow(p.at("a").get<int>(), p.at("b").get<int>(),
                  p.at("axis").get<std::string>() == "x" ? Axis::X : Axis::Y);
    return cat;
}

json tilemap_to_json(const worldgen::TileMap& map) {
    return {{"width", map.width},
            {"height", map.height},
            {"seed", map.seed},
            {"cells", map.cells}};
}

worldgen::TileMap tilemap_from_json(const json& j) {
    worldgen::TileMap m;
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.seed = j.at("seed").get<uint64_t>();
    m.cells = j.at("cells").get<std::vector<int>>();
    if (static_cast<int>(m.cells.size()) != m.width * m.height)
        throw ConfigError("tile map cell count mismatch");
    return m;
}

json graph_to_json(const navgraph::NavGraph& g) {
    json j;
    j["nodes"] = json::array();
    for (const auto& n : g.nodes)
        j["nodes"].push_back({{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}, {"z", n.elevation}});
    j["edges"] = json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"len", e.length}});
    return j;
}

navgraph::NavGraph graph_from_json(const json& j) {
    navgraph::NavGraph g;
    for (const auto& n : j.at("nodes"))
        g.nodes.push_back({n.at("id").get<int>(),
                           {n.at("x").get<double>(), n.at("y").get<double>()},
                           n.at("z").get<double>()});
    for (const auto& e : j.at("edges"))
        g.edges.push_back({e.at("a").get<int>(), e.at("b").get<int>(), e.at("len").get<double>()});
    g.rebuild_index();
    return g;
}

json terrain_params_to_json(const terrain::TerrainParams& p) {
    return {{"step_height", p.step_height}, {"step_depth", p.step_depth},
            {"roughness_amp", p.roughness_amp}, {"correlation_len", p.correlation_len},
            {"friction", p.friction}, {"slope", p.slope}};
}

terrain::TerrainParams terrain_params_from_json(const json& j) {
    terrain::TerrainParams p;
    p.step_height = j.at("step_height").get<double>();
    p.step_depth = j.at("step_depth").get<double>();
    p.roughness_amp = j.at("roughness_amp").get<double>();
    p.correlation_len = j.at("correlation_len").get<double>();
    p.friction = j.at("friction").get<double>();
    p.slope = j.at("slope").get<double>();
    return p;
}

json step_record_to_json(const episode::StepRecord& r) {
    return {{"t", r.t},
            {"pos", {r.pos.x, r.pos.y}},
            {"yaw", r.yaw},
            {"action", {r.action.vx, r.action.vy, r.action.wz}},
            {"wp1", {r.wp1.x, r.wp1.y}},
            {"wp2", {r.wp2.x, r.wp2.y}},
            {"reward",
             {{"hl",
               {{"goal", r.reward.hl.goal},
                {"dense", r.reward.hl.dense},
                {"exploration", r.reward.hl.exploration},
                {"stability", r.reward.hl.stability}}},
              {"ll",
               {{"lin_vel", r.reward.ll.lin_vel},
                {"ang_vel", r.reward.ll.ang_vel},
                {"body_motion", r.reward.ll.body_motion},
                {"orientation", r.reward.ll.orientation},
                {"base_height", r.reward.ll.base_height}}},
              {"reg",
               {{"torque", r.reward.reg.torque},
                {"joint_motion", r.reward.reg.joint_motion},
                {"action_smooth", r.reward.reg.action_smooth},
                {"joint_limit", r.reward.reg.joint_limit},
                {"body_contact", r.reward.reg.body_contact},
                {"survival", r.reward.reg.survival}}},
              {"r_low", r.reward.r_low},
              {"r_high", r.reward.r_high}}},
            {"done", r.done},
            {"reason", episode::done_reason_name(r.reason)}};
}

json curriculum_record_to_json(const terrain::CurriculumRecord& r) {
    return {{"params", terrain_params_to_json(r.params)},
            {"scores", r.scores},
            {"fitness", r.fitness}};
}

std::string replay_to_jsonl(const std::vector<episode::StepRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += step_record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

// ---- height field raster ---------------------------------------------------

void save_height_field(const terrain::HeightField& f, const std::string& raster_path,
                       const std::string& sidecar_path) {
    std::ofstream raster(raster_path, std::ios::binary);
    if (!raster) throw IoError("cannot write " + raster_path);
    raster.write(reinterpret_cast<const char*>(f.data.data()),
                 static_cast<std::streamsize>(f.data.size() * sizeof(float)));
    raster.write(reinterpret_cast<const char*>(f.friction.data()),
                 static_cast<std::streamsize>(f.friction.size() * sizeof(float)));

    json sidecar = {{"resolution", f.resolution},
                    {"origin", {f.origin.x, f.origin.y}},
                    {"width", f.width},
                    {"height", f.height},
                    {"layers", {"elevation", "friction"}}};
    write_text(sidecar_path, sidecar.dump(2) + "\n");
}

terrain::HeightField load_height_field(const std::string& raster_path,
                                       const std::string& sidecar_path) {
    const json sidecar = json::parse(read_text(sidecar_path));
    terrain::HeightField f;
    f.resolution = sidecar.at("resolution").get<double>();
    f.origin = {sidecar.at("origin")[0].get<double>(), sidecar.at("origin")[1].get<double>()};
    f.width = sidecar.at("width").get<int>();
    f.height = sidecar.at("height").get<int>();
    const size_t n = static_cast<size_t>(f.width) * f.height;
    f.data.resize(n);
    f.friction.resize(n);

    std::ifstream raster(raster_path, std::ios::binary);
    if (!raster) throw IoError("cannot read " + raster_path);
    raster.read(reinterpret_cast<char*>(f.data.data()),
                static_cast<std::streamsize>(n * sizeof(float)));
    raster.read(reinterpret_cast<char*>(f.friction.data()),
                static_cast<std::streamsize>(n * sizeof(float)));
    if (!raster) throw IoError("raster file truncated: " + raster_path);
    return f;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- run config ------------------------------------------------------------

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& scope) {
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + scope);
    }
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"schema_version", "seed", "world_width", "world_height", "tile_edge",
                         "resolution", "catalog_path", "terrain_params", "param_space",
                         "curriculum", "episode", "weights", "actuator", "eval"},
                        "config");
    RunConfig cfg;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1) throw ConfigError("unsupported schema_version");
    cfg.seed = j.value("seed", uint64_t{0});
    cfg.world_width = j.value("world_width", cfg.world_width);
    cfg.world_height = j.value("world_height", cfg.world_height);
    cfg.tile_edge = j.value("tile_edge", cfg.tile_edge);
    cfg.resolution = j.value("resolution", cfg.resolution);
    cfg.catalog_path = j.value("catalog_path", std::string{});
    if (j.contains("terrain_params")) cfg.terrain_params = terrain_params_from_json(j["terrain_params"]);

    if (j.contains("param_space")) {
        const json& ps = j["param_space"];
        reject_unknown_keys(ps, {"lo", "hi"}, "param_space");
        const auto lo = ps.at("lo").get<std::vector<double>>();
        const auto hi = ps.at("hi").get<std::vector<double>>();
        if (lo.size() != terrain::TerrainParams::kNumParams || hi.size() != lo.size())
            throw ConfigError("param_space must have 6 lo/hi entries");
        for (int i = 0; i < terrain::TerrainParams::kNumParams; ++i) {
            cfg.param_space.lo[i] = lo[static_cast<size_t>(i)];
            cfg.param_space.hi[i] = hi[static_cast<size_t>(i)];
        }
    }

    if (j.contains("curriculum")) {
        const json& c = j["curriculum"];
        reject_unknown_keys(c, {"t_l", "t_h", "population", "rollouts", "elite_frac",
                                "mutation_scale"},
                            "curriculum");
        cfg.curriculum_t_l = c.value("t_l", cfg.curriculum_t_l);
        cfg.curriculum_t_h = c.value("t_h", cfg.curriculum_t_h);
        cfg.curriculum_population = c.value("population", cfg.curriculum_population);
        cfg.curriculum_rollouts = c.value("rollouts", cfg.curriculum_rollouts);
        cfg.elite_frac = c.value("elite_frac", cfg.elite_frac);
        cfg.mutation_scale = c.value("mutation_scale", cfg.mutation_scale);
    }

    if (j.contains("episode")) {
        const json& e = j["episode"];
        reject_unknown_keys(e,
                            {"hl_dt", "ll_dt", "max_episode_s", "goal_radius", "obstacle_count_min",
                             "obstacle_count_max", "path_min_len", "path_max_len", "lookahead_min",
                             "lookahead_max", "resample_prob", "scan_pitch"},
                            "episode");
        auto& ep = cfg.episode;
        ep.hl_dt = e.value("hl_dt", ep.hl_dt);
        ep.ll_dt = e.value("ll_dt", ep.ll_dt);
        ep.max_episode_s = e.value("max_episode_s", ep.max_episode_s);
        ep.goal_radius = e.value("goal_radius", ep.goal_radius);
        ep.obstacle_count_min = e.value("obstacle_count_min", ep.obstacle_count_min);
        ep.obstacle_count_max = e.value("obstacle_count_max", ep.obstacle_count_max);
        ep.path_min_len = e.value("path_min_len", ep.path_min_len);
        ep.path_max_len = e.value("path_max_len", ep.path_max_len);
        ep.lookahead_min = e.value("lookahead_min", ep.lookahead_min);
        ep.lookahead_max = e.value("lookahead_max", ep.lookahead_max);
        ep.resample_prob = e.value("resample_prob", ep.resample_prob);
        ep.scan.pitch = e.value("scan_pitch", ep.scan.pitch);
    }

    if (j.contains("weights")) {
        const json& w = j["weights"];
        reject_unknown_keys(w,
                            {"goal", "dense", "exploration", "stability", "lin_vel", "ang_vel",
                             "body_motion", "orientation", "base_height", "torque", "joint_motion",
                             "action_smooth", "joint_limit", "body_contact", "survival", "w_l",
                             "c_k", "knee_limit"},
                            "weights");
        auto& rw = cfg.weights;
        rw.goal = w.value("goal", rw.goal);
        rw.dense = w.value("dense", rw.dense);
        rw.exploration = w.value("exploration", rw.exploration);
        rw.stability = w.value("stability", rw.stability);
        rw.lin_vel = w.value("lin_vel", rw.lin_vel);
        rw.ang_vel = w.value("ang_vel", rw.ang_vel);
        rw.body_motion = w.value("body_motion", rw.body_motion);
        rw.orientation = w.value("orientation", rw.orientation);
        rw.base_height = w.value("base_height", rw.base_height);
        rw.torque = w.value("torque", rw.torque);
        rw.joint_motion = w.value("joint_motion", rw.joint_motion);
        rw.action_smooth = w.value("action_smooth", rw.action_smooth);
        rw.joint_limit = w.value("joint_limit", rw.joint_limit);
        rw.body_contact = w.value("body_contact", rw.body_contact);
        rw.survival = w.value("survival", rw.survival);
        rw.w_l = w.value("w_l", rw.w_l);
        rw.c_k = w.value("c_k", rw.c_k);
        rw.knee_limit = w.value("knee_limit", rw.knee_limit);
    }

    if (j.contains("actuator")) {
        const json& a = j["actuator"];
        reject_unknown_keys(a, {"torque_constant", "gear_ratio", "c1", "c2"}, "actuator");
        cfg.actuator.torque_constant = a.value("torque_constant", cfg.actuator.torque_constant);
        cfg.actuator.gear_ratio = a.value("gear_ratio", cfg.actuator.gear_ratio);
        cfg.actuator.c1 = a.value("c1", cfg.actuator.c1);
        cfg.actuator.c2 = a.value("c2", cfg.actuator.c2);
    }

    if (j.contains("eval")) {
        const json& e = j["eval"];
        reject_unknown_keys(e, {"goal_radius", "budget_s"}, "eval");
        cfg.eval_goal_radius = e.value("goal_radius", cfg.eval_goal_radius);
        cfg.eval_budget_s = e.value("budget_s", cfg.eval_budget_s);
    }
    return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["schema_version"] = cfg.schema_version;
    j["seed"] = cfg.seed;
    j["world_width"] = cfg.world_width;
    j["world_height"] = cfg.world_height;
    j["tile_edge"] = cfg.tile_edge;
    j["resolution"] = cfg.resolution;
    if (!cfg.catalog_path.empty()) j["catalog_path"] = cfg.catalog_path;
    j["terrain_params"] = terrain_params_to_json(cfg.terrain_params);
    j["param_space"] = {
        {"lo", std::vector<double>(cfg.param_space.lo,
                                   cfg.param_space.lo + terrain::TerrainParams::kNumParams)},
        {"hi", std::vector<double>(cfg.param_space.hi,
                                   cfg.param_space.hi + terrain::TerrainParams::kNumParams)}};
    j["curriculum"] = {{"t_l", cfg.curriculum_t_l},       {"t_h", cfg.curriculum_t_h},
                       {"population", cfg.curriculum_population},
                       {"rollouts", cfg.curriculum_rollouts},
                       {"elite_frac", cfg.elite_frac},    {"mutation_scale", cfg.mutation_scale}};
    j["episode"] = {{"hl_dt", cfg.episode.hl_dt},
                    {"ll_dt", cfg.episode.ll_dt},
                    {"max_episode_s", cfg.episode.max_episode_s},
                    {"goal_radius", cfg.episode.goal_radius},
                    {"obstacle_count_min", cfg.episode.obstacle_count_min},
                    {"obstacle_count_max", cfg.episode.obstacle_count_max},
                    {"path_min_len", cfg.episode.path_min_len},
                    {"path_max_len", cfg.episode.path_max_len},
                    {"lookahead_min", cfg.episode.lookahead_min},
                    {"lookahead_max", cfg.episode.lookahead_max},
                    {"resample_prob", cfg.episode.resample_prob},
                    {"scan_pitch", cfg.episode.scan.pitch}};
    j["eval"] = {{"goal_radius", cfg.eval_goal_radius}, {"budget_s", cfg.eval_budget_s}};
    return j;
}

std::vector<worldgen::TileKind> default_tile_kinds() {
    using worldgen::TileCategory;
    return {{0, TileCategory::Floor0, 0},
            {1, TileCategory::Floor1, 0},
            {2, TileCategory::StairX, 0},
            {3, TileCategory::StairY, 0},
            {4, TileCategory::Obstacle, 0}};
}

std::vector<std::vector<int>> default_example_grid() {
    // cross of raised floor reached by stairs, obstacle pocket below
    return {{0, 0, 0, 0, 0, 0, 0},
            {0, 0, 0, 3, 0, 0, 0},
            {0, 0, 0, 3, 0, 0, 0},
            {0, 2, 2, 1, 2, 2, 0},
            {0, 0, 0, 3, 0, 0, 0},
            {0, 0, 0, 3, 0, 0, 0},
            {0, 4, 4, 0, 0, 0, 0},
            {0, 0, 0, 0, 0, 0, 0}};
}

}  // namespace navsim::io
