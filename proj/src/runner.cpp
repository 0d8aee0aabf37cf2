#include "navsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

#include "navsim/agent.hpp"
#include "navsim/errors.hpp"

namespace navsim::runner {

namespace fs = std::filesystem;
using io::json;

WorldBundle generate_world(const io::RunConfig& cfg) {
    WorldBundle w;
    if (cfg.catalog_path.empty()) {
        w.catalog = worldgen::build_tile_catalog(io::default_example_grid(),
                                                 io::default_tile_kinds(), 2);
    } else {
        w.catalog = io::catalog_from_json(json::parse(io::read_text(cfg.catalog_path)));
    }
    w.map = worldgen::wfc_generate(w.catalog, cfg.world_width, cfg.world_height, cfg.seed);
    w.field = terrain::synthesize_height_field(w.map, w.catalog, cfg.terrain_params,
                                               cfg.resolution, cfg.tile_edge);
    w.graph = navgraph::build_nav_graph(w.map, w.catalog, cfg.terrain_params, cfg.tile_edge);
    return w;
}

void save_world(const WorldBundle& w, const io::RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    io::write_text((dir / "catalog.json").string(), io::catalog_to_json(w.catalog).dump(2) + "\n");
    io::write_text((dir / "tilemap.json").string(), io::tilemap_to_json(w.map).dump(2) + "\n");
    io::write_text((dir / "graph.json").string(), io::graph_to_json(w.graph).dump(2) + "\n");
    io::save_height_field(w.field, (dir / "heightfield.f32").string(),
                          (dir / "heightfield.json").string());
    json manifest = {{"tool", "navsim"},
                     {"version", "0.1.0"},
                     {"seed", cfg.seed},
                     {"config", io::run_config_to_json(cfg)}};
    io::write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

WorldBundle load_world(const std::string& dir_str) {
    const fs::path dir(dir_str);
    WorldBundle w;
    w.catalog = io::catalog_from_json(json::parse(io::read_text((dir / "catalog.json").string())));
    w.map = io::tilemap_from_json(json::parse(io::read_text((dir / "tilemap.json").string())));
    w.graph = io::graph_from_json(json::parse(io::read_text((dir / "graph.json").string())));
    w.field = io::load_height_field((dir / "heightfield.f32").string(),
                                    (dir / "heightfield.json").string());
    return w;
}

namespace {

// Largest rise ahead of the robot in the front strip of the scan, m above the
// terrain under the robot.
double max_scan_rise(const episode::HLObservation& obs, const episode::EpisodeConfig& cfg) {
    const episode::ScanSpec& s = cfg.scan;
    double rise = 0.0;
    for (int iy = 0; iy < s.ny(); ++iy) {
        const double y = s.y_min + iy * s.pitch;
        if (std::abs(y) > 0.6) continue;
        for (int ix = 0; ix < s.nx(); ++ix) {
            const double x = s.x_min + ix * s.pitch;
            if (x < 0.3 || x > 1.2) continue;
            const double h = obs.scan[static_cast<size_t>(iy) * s.nx() + ix] + cfg.base_height;
            rise = std::max(rise, h);
        }
    }
    return rise;
}

}  // namespace

RolloutResult run_scripted_episode(const WorldBundle& world, const io::RunConfig& cfg,
                                   uint64_t episode_seed) {
    // evaluation protocol: tight goal radius, long budget
    episode::EpisodeConfig ep_cfg = cfg.episode;
    ep_cfg.goal_radius = cfg.eval_goal_radius;
    ep_cfg.max_episode_s = cfg.eval_budget_s;
    episode::Episode ep(world.field, world.graph, ep_cfg);
    ep.reset(episode_seed);

    RolloutResult out;
    out.result.shortest_len = ep.state().path.total_length();
    double traveled = 0.0;
    Vec2 prev_pos = ep.state().proxy.pos;

    // the scripted driver tracks the path through the deployment selector;
    // the training waypoints still flow into observations and rewards
    navgraph::AnchorPursuit pursuit(ep.state().path);

    while (!ep.state().done) {
        const episode::HLObservation obs = ep.observation();
        const Vec2 target = pursuit.next_waypoint(world.graph, ep.state().proxy.pos);
        agent::ScriptedPolicyInput in;
        in.wp1_robot_frame =
            (target - ep.state().proxy.pos).rotated(-ep.state().proxy.yaw);
        in.max_scan_rise = max_scan_rise(obs, cfg.episode);
        const auto u = agent::scripted_policy(in, cfg.episode.bounds);
        const agent::VelocityCommand cmd = agent::map_to_bounds(u, cfg.episode.bounds);

        const episode::StepRecord rec = ep.step(cmd, cfg.weights);
        traveled += distance(prev_pos, rec.pos);
        prev_pos = rec.pos;
        out.records.push_back(rec);
        out.commands.emplace_back(cmd.vx, cmd.vy);
        out.realized.emplace_back(ep.state().proxy.vel.vx, ep.state().proxy.vel.vy);

        if (!out.result.success && rec.t <= cfg.eval_budget_s &&
            distance(rec.pos, ep.goal()) < cfg.eval_goal_radius)
            out.result.success = true;
    }
    out.result.traveled_len = traveled;
    out.result.duration = ep.state().elapsed;
    return out;
}

std::vector<RolloutResult> rollout_batch(const WorldBundle& world, const io::RunConfig& cfg,
                                         int episodes, uint64_t base_seed, int threads) {
    std::vector<RolloutResult> results(static_cast<size_t>(episodes));
    auto seed_for = [base_seed](int i) {
        Rng r(base_seed);
        return r.derive(static_cast<uint64_t>(i) + 1);
    };

    threads = std::max(1, threads);
    if (threads == 1 || episodes <= 1) {
        for (int i = 0; i < episodes; ++i)
            results[static_cast<size_t>(i)] = run_scripted_episode(world, cfg, seed_for(i));
        return results;
    }

    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= episodes) return;
                results[static_cast<size_t>(i)] = run_scripted_episode(world, cfg, seed_for(i));
            }
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

json metrics_report(const std::vector<RolloutResult>& rollouts, const io::RunConfig& cfg) {
    json rep;
    if (rollouts.empty()) {
        rep = {{"episodes", 0}, {"spl", nullptr}, {"success_rate", nullptr},
               {"cot_mean", nullptr}, {"tracking", nullptr}};
        return rep;
    }

    std::vector<eval::EpisodeResult> results;
    std::vector<Vec2> commands, realized;
    for (const auto& r : rollouts) {
        results.push_back(r.result);
        commands.insert(commands.end(), r.commands.begin(), r.commands.end());
        realized.insert(realized.end(), r.realized.begin(), r.realized.end());
    }

    rep["episodes"] = rollouts.size();
    rep["spl"] = eval::spl(results);
    int succ = 0;
    for (const auto& r : results) succ += r.success ? 1 : 0;
    rep["success_rate"] = static_cast<double>(succ) / static_cast<double>(results.size());

    // wheel energy from the realized speeds through the actuator model
    eval::EnergyLog elog;
    elog.weight = 50.0 * 9.81;
    elog.sample_rate = 1.0 / cfg.episode.hl_dt;
    constexpr double kWheelRadius = 0.1;  // m
    agent::CurrentModel current;
    for (const Vec2& v : realized) {
        const double wheel_speed = v.norm() / kWheelRadius;
        const double i = current.step(wheel_speed * 0.02, cfg.episode.hl_dt);
        const double tau = agent::motor_torque(i, cfg.actuator) +
                           agent::friction_torque(wheel_speed, cfg.actuator);
        elog.joint_torques.push_back(std::vector<double>(4, tau));
        elog.joint_speeds.push_back(std::vector<double>(4, wheel_speed));
        elog.base_speed.push_back(v.norm());
    }
    try {
        rep["cot_mean"] = eval::mechanical_cot(elog);
    } catch (const NoQualifyingSamples&) {
        rep["cot_mean"] = nullptr;
    }

    try {
        const auto stats =
            eval::tracking_error_stats(commands, realized, 1.0 / cfg.episode.hl_dt);
        rep["tracking"] = {{"mean", stats.mean}, {"bins", stats.bins},
                           {"bin_width", stats.bin_width},
                           {"samples", stats.qualifying_samples}};
    } catch (const NoQualifyingSamples&) {
        rep["tracking"] = nullptr;
    }

    const eval::BucketReport buckets = eval::bucket_report(results);
    rep["by_path_length"] = {
        {"5_to_10_m",
         {{"spl", buckets.spl_5_10}, {"success_rate", buckets.success_5_10}, {"n", buckets.n_5_10}}},
        {"10_to_20_m",
         {{"spl", buckets.spl_10_20}, {"success_rate", buckets.success_10_20},
          {"n", buckets.n_10_20}}}};
    return rep;
}

std::string metrics_csv(const std::vector<RolloutResult>& rollouts) {
    std::vector<eval::EpisodeResult> results;
    for (const auto& r : rollouts) results.push_back(r.result);
    std::string csv = "bucket,spl,success_rate,episodes\n";
    if (results.empty()) return csv;
    const eval::BucketReport b = eval::bucket_report(results);
    char line[128];
    std::snprintf(line, sizeof(line), "5-10 m,%.6f,%.6f,%d\n", b.spl_5_10, b.success_5_10,
                  b.n_5_10);
    csv += line;
    std::snprintf(line, sizeof(line), "10-20 m,%.6f,%.6f,%d\n", b.spl_10_20, b.success_10_20,
                  b.n_10_20);
    csv += line;
    return csv;
}

std::vector<double> evaluate_terrain_params(const terrain::TerrainParams& params,
                                            const io::RunConfig& cfg, uint64_t seed,
                                            int rollouts) {
    // stair strip: floor, up-stair, raised floor, down-stair, floor
    std::vector<worldgen::TileKind> kinds = io::default_tile_kinds();
    const std::vector<std::vector<int>> strip = {{0, 2, 1, 2, 0, 0}};
    worldgen::TileCatalog cat = worldgen::build_tile_catalog(strip, kinds, 1);
    worldgen::TileMap map;
    map.width = 6;
    map.height = 1;
    map.cells = strip[0];
    map.seed = seed;
    const terrain::HeightField field =
        terrain::synthesize_height_field(map, cat, params, cfg.resolution, cfg.tile_edge);

    std::vector<double> scores;
    Rng rng(seed);
    for (int r = 0; r < rollouts; ++r) {
        const double speed = rng.uniform(0.3, 1.5);
        agent::VelocityCommand cmd{speed, 0.0, 0.0};

        agent::ProxyState st;
        st.pos = {0.5 * cfg.tile_edge, 0.5 * cfg.tile_edge};
        st.z = field.sample(st.pos);
        std::vector<Vec2> realized;
        const double horizon_s = 8.0;
        const int steps = static_cast<int>(horizon_s / cfg.episode.ll_dt);
        for (int i = 0; i < steps; ++i) {
            st = agent::proxy_step(st, cmd, field, cfg.episode.ll_dt, cfg.episode.proxy);
            realized.emplace_back(Vec2{st.vel.vx, st.vel.vy}.rotated(st.yaw));
        }
        scores.push_back(terrain::traversal_score(realized, {cmd.vx, cmd.vy}));
    }
    return scores;
}

std::vector<CurriculumGeneration> filter_terrain(const io::RunConfig& cfg, int generations,
                                                 int reseed_budget) {
    Rng rng(cfg.seed ^ 0x5eedc0ffeeull);
    std::vector<terrain::CurriculumRecord> population;
    auto reseed = [&] {
        population.clear();
        for (int i = 0; i < cfg.curriculum_population; ++i) {
            terrain::CurriculumRecord rec;
            rec.params = terrain::sample_terrain_params(cfg.param_space, rng);
            population.push_back(std::move(rec));
        }
    };
    reseed();

    std::vector<CurriculumGeneration> log;
    int reseeds = 0;
    for (int g = 0; g < generations; ++g) {
        for (size_t i = 0; i < population.size(); ++i) {
            auto& rec = population[i];
            rec.scores = evaluate_terrain_params(
                rec.params, cfg, rng.derive(static_cast<uint64_t>(i) + 1),
                cfg.curriculum_rollouts);
            rec.fitness =
                terrain::curriculum_fitness(rec.scores, cfg.curriculum_t_l, cfg.curriculum_t_h);
        }
        log.push_back({g, population});
        if (g + 1 == generations) break;
        try {
            population = terrain::evolve_params(population, cfg.param_space, cfg.elite_frac,
                                                cfg.mutation_scale, rng);
        } catch (const AllZeroFitness&) {
            if (++reseeds > reseed_budget) throw;
            reseed();
        }
    }
    return log;
}

}  // namespace navsim::runner
