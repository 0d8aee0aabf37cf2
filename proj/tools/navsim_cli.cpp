#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "navsim/errors.hpp"
#include "navsim/io.hpp"
#include "navsim/runner.hpp"

namespace fs = std::filesystem;
using navsim::io::json;

namespace {

// exit codes: 2 config, 3 generation contradiction, 4 io, 5 rollout
// invariant violation, 6 persistent zero-fitness curriculum
constexpr int kExitConfig = 2;
constexpr int kExitContradiction = 3;
constexpr int kExitIo = 4;
constexpr int kExitRollout = 5;
constexpr int kExitCurriculum = 6;

void emit_error(const std::string& kind, const std::string& message) {
    json err = {{"error", kind}, {"message", message}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
}

navsim::io::RunConfig load_config(const std::string& path, uint64_t seed_override,
                                  bool has_seed) {
    navsim::io::RunConfig cfg;
    if (!path.empty())
        cfg = navsim::io::run_config_from_json(json::parse(navsim::io::read_text(path)));
    if (has_seed) cfg.seed = seed_override;
    return cfg;
}

int cmd_generate(const std::string& config_path, uint64_t seed, bool has_seed,
                 const std::string& out_dir) {
    const auto cfg = load_config(config_path, seed, has_seed);
    const auto world = navsim::runner::generate_world(cfg);
    navsim::runner::save_world(world, cfg, out_dir);
    std::printf("world bundle written to %s (%dx%d tiles, %zu graph nodes)\n", out_dir.c_str(),
                world.map.width, world.map.height, world.graph.nodes.size());
    return 0;
}

int cmd_graph(const std::string& world_dir, int src, int dst) {
    const auto world = navsim::runner::load_world(world_dir);
    if (src >= 0 && dst >= 0) {
        const auto path = navsim::navgraph::shortest_path(world.graph, src, dst);
        if (!path) {
            std::printf("unreachable\n");
            return 0;
        }
        json out = {{"nodes", path->node_ids}, {"length", path->total_length()}};
        std::printf("%s\n", out.dump().c_str());
    } else {
        std::printf("%s\n", navsim::io::graph_to_json(world.graph).dump().c_str());
    }
    return 0;
}

int cmd_rollout(const std::string& world_dir, const std::string& config_path, int episodes,
                uint64_t seed, bool has_seed, int threads, const std::string& out_dir) {
    auto cfg = load_config(config_path, seed, has_seed);
    const auto world = navsim::runner::load_world(world_dir);
    const auto rollouts =
        navsim::runner::rollout_batch(world, cfg, episodes, has_seed ? seed : cfg.seed, threads);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    std::string results_jsonl;
    for (size_t i = 0; i < rollouts.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "replay_%03zu.jsonl", i);
        navsim::io::write_text((dir / name).string(),
                               navsim::io::replay_to_jsonl(rollouts[i].records));
        json line = {{"episode", i},
                     {"success", rollouts[i].result.success},
                     {"shortest_len", rollouts[i].result.shortest_len},
                     {"traveled_len", rollouts[i].result.traveled_len},
                     {"duration", rollouts[i].result.duration}};
        results_jsonl += line.dump() + "\n";
    }
    navsim::io::write_text((dir / "results.jsonl").string(), results_jsonl);
    const json report = navsim::runner::metrics_report(rollouts, cfg);
    navsim::io::write_text((dir / "metrics.json").string(), report.dump(2) + "\n");
    navsim::io::write_text((dir / "metrics.csv").string(), navsim::runner::metrics_csv(rollouts));
    std::printf("%s\n", report.dump().c_str());
    return 0;
}

int cmd_filter_terrain(const std::string& config_path, uint64_t seed, bool has_seed,
                       int generations, const std::string& out_path) {
    const auto cfg = load_config(config_path, seed, has_seed);
    const auto log = navsim::runner::filter_terrain(cfg, generations);
    std::string jsonl;
    for (const auto& gen : log)
        for (const auto& rec : gen.population) {
            json line = navsim::io::curriculum_record_to_json(rec);
            line["generation"] = gen.generation;
            jsonl += line.dump() + "\n";
        }
    navsim::io::write_text(out_path, jsonl);

    const auto& last = log.back().population;
    int positive = 0;
    for (const auto& r : last) positive += r.fitness > 0.0 ? 1 : 0;
    std::printf("generations=%zu final_population=%zu positive_fitness=%d\n", log.size(),
                last.size(), positive);
    return 0;
}

int cmd_eval(const std::string& run_dir, const std::string& config_path, uint64_t seed,
             bool has_seed, const std::string& out_path) {
    const auto cfg = load_config(config_path, seed, has_seed);
    const fs::path dir(run_dir);
    std::vector<navsim::eval::EpisodeResult> results;
    std::istringstream lines(navsim::io::read_text((dir / "results.jsonl").string()));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        navsim::eval::EpisodeResult r;
        r.success = j.at("success").get<bool>();
        r.shortest_len = j.at("shortest_len").get<double>();
        r.traveled_len = j.at("traveled_len").get<double>();
        r.duration = j.at("duration").get<double>();
        results.push_back(r);
    }
    if (results.empty()) throw navsim::EmptyResults();

    json rep;
    rep["episodes"] = results.size();
    rep["spl"] = navsim::eval::spl(results);
    int succ = 0;
    for (const auto& r : results) succ += r.success ? 1 : 0;
    rep["success_rate"] = static_cast<double>(succ) / static_cast<double>(results.size());
    const auto buckets = navsim::eval::bucket_report(results);
    rep["by_path_length"] = {
        {"5_to_10_m", {{"spl", buckets.spl_5_10}, {"success_rate", buckets.success_5_10},
                        {"n", buckets.n_5_10}}},
        {"10_to_20_m", {{"spl", buckets.spl_10_20}, {"success_rate", buckets.success_10_20},
                         {"n", buckets.n_10_20}}}};
    (void)cfg;
    if (!out_path.empty()) navsim::io::write_text(out_path, rep.dump(2) + "\n");
    std::printf("%s\n", rep.dump().c_str());
    return 0;
}

int cmd_replay_export(const std::string& replay_path, const std::string& out_path) {
    std::istringstream lines(navsim::io::read_text(replay_path));
    std::string line;
    std::string csv =
        "t,x,y,yaw,vx_cmd,vy_cmd,wz_cmd,wp1_x,wp1_y,wp2_x,wp2_y,r_high,r_low,done,reason\n";
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.9f,%.9f,%d,%s\n",
                      j.at("t").get<double>(), j.at("pos")[0].get<double>(),
                      j.at("pos")[1].get<double>(), j.at("yaw").get<double>(),
                      j.at("action")[0].get<double>(), j.at("action")[1].get<double>(),
                      j.at("action")[2].get<double>(), j.at("wp1")[0].get<double>(),
                      j.at("wp1")[1].get<double>(), j.at("wp2")[0].get<double>(),
                      j.at("wp2")[1].get<double>(), j.at("reward").at("r_high").get<double>(),
                      j.at("reward").at("r_low").get<double>(), j.at("done").get<bool>() ? 1 : 0,
                      j.at("reason").get<std::string>().c_str());
        csv += buf;
    }
    navsim::io::write_text(out_path, csv);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"navsim: procedural navigation worlds, proxy rollouts, and metrics"};
    app.require_subcommand(1);

    std::string config_path, out = "out", world_dir = "out", replay_path;
    uint64_t seed = 0;
    bool has_seed = false;
    int episodes = 10, threads = 1, generations = 10;
    int src = -1, dst = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run config JSON");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            has_seed = true;
        });
    };

    auto* gen = app.add_subcommand("generate", "generate a world bundle");
    add_common(gen);
    gen->add_option("--out", out, "output directory");

    auto* graph = app.add_subcommand("graph", "inspect a bundle's navigation graph");
    graph->add_option("--world", world_dir, "world bundle directory")->required();
    graph->add_option("--src", src, "source node id");
    graph->add_option("--dst", dst, "destination node id");

    auto* roll = app.add_subcommand("rollout", "run scripted-policy episodes");
    add_common(roll);
    roll->add_option("--world", world_dir, "world bundle directory")->required();
    roll->add_option("--episodes", episodes, "episode count");
    roll->add_option("--threads", threads, "worker threads");
    roll->add_option("--out", out, "output directory");

    auto* filt = app.add_subcommand("filter-terrain", "minimal-criterion terrain filtering");
    add_common(filt);
    filt->add_option("--generations", generations, "GA generations");
    filt->add_option("--out", out, "curriculum log path (JSON lines)");

    auto* ev = app.add_subcommand("eval", "metrics from a rollout directory");
    add_common(ev);
    ev->add_option("--run", world_dir, "rollout output directory")->required();
    ev->add_option("--out", out, "metrics JSON path");

    auto* rex = app.add_subcommand("replay-export", "replay JSONL to CSV");
    rex->add_option("--replay", replay_path, "replay .jsonl path")->required();
    rex->add_option("--out", out, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(config_path, seed, has_seed, out);
        if (graph->parsed()) return cmd_graph(world_dir, src, dst);
        if (roll->parsed())
            return cmd_rollout(world_dir, config_path, episodes, seed, has_seed, threads, out);
        if (filt->parsed())
            return cmd_filter_terrain(config_path, seed, has_seed, generations, out);
        if (ev->parsed())
            return cmd_eval(world_dir, config_path, seed, has_seed, out == "out" ? "" : out);
        if (rex->parsed()) return cmd_replay_export(replay_path, out);
    } catch (const navsim::ConfigError& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const navsim::ContradictionAfterRetries& e) {
        emit_error("contradiction", e.what());
        return kExitContradiction;
    } catch (const navsim::AllZeroFitness& e) {
        emit_error("curriculum", e.what());
        return kExitCurriculum;
    } catch (const navsim::IoError& e) {
        emit_error("io", e.what());
        return kExitIo;
    } catch (const nlohmann::json::exception& e) {
        emit_error("config", e.what());
        return kExitConfig;
    } catch (const navsim::Error& e) {
        emit_error("rollout", e.what());
        return kExitRollout;
    }
    return 0;
}
