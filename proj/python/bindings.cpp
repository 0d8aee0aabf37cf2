#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "navsim/agent.hpp"
#include "navsim/errors.hpp"
#include "navsim/io.hpp"
#include "navsim/runner.hpp"

namespace py = pybind11;
using namespace navsim;
using nlohmann::json;

namespace {

io::RunConfig config_from_str(const std::string& config_json) {
    return io::run_config_from_json(config_json.empty() ? json::object()
                                                        : json::parse(config_json));
}

// dict/list bridging goes through serialized JSON; the python wrapper
// converts both ways so callers never see the strings
std::string rollout_json(const runner::WorldBundle& world, const std::string& config_json,
                         int episodes, uint64_t seed, int threads) {
    const auto cfg = config_from_str(config_json);
    const auto rollouts = runner::rollout_batch(world, cfg, episodes, seed, threads);
    json out;
    out["metrics"] = runner::metrics_report(rollouts, cfg);
    out["results"] = json::array();
    for (const auto& r : rollouts)
        out["results"].push_back({{"success", r.result.success},
                                  {"shortest_len", r.result.shortest_len},
                                  {"traveled_len", r.result.traveled_len},
                                  {"duration", r.result.duration}});
    return out.dump();
}

std::string replay_json(const runner::WorldBundle& world, const std::string& config_json,
                        uint64_t seed) {
    const auto cfg = config_from_str(config_json);
    const auto r = runner::run_scripted_episode(world, cfg, seed);
    return io::replay_to_jsonl(r.records);
}

std::string filter_terrain_json(const std::string& config_json, int generations) {
    const auto cfg = config_from_str(config_json);
    const auto log = runner::filter_terrain(cfg, generations);
    json out = json::array();
    for (const auto& gen : log) {
        json g = {{"generation", gen.generation}, {"population", json::array()}};
        for (const auto& rec : gen.population)
            g["population"].push_back(io::curriculum_record_to_json(rec));
        out.push_back(g);
    }
    return out.dump();
}

}  // namespace

PYBIND11_MODULE(_navsim, m) {
    m.doc() = "procedural navigation worlds, proxy rollouts, and metrics";

    py::register_exception<Error>(m, "NavsimError");

    py::class_<runner::WorldBundle>(m, "World")
        .def_property_readonly("width", [](const runner::WorldBundle& w) { return w.map.width; })
        .def_property_readonly("height",
                               [](const runner::WorldBundle& w) { return w.map.height; })
        .def_property_readonly(
            "tiles", [](const runner::WorldBundle& w) { return w.map.cells; })
        .def_property_readonly(
            "num_nodes", [](const runner::WorldBundle& w) { return w.graph.nodes.size(); })
        .def("height_at",
             [](const runner::WorldBundle& w, double x, double y) {
                 return w.field.sample({x, y});
             })
        .def("shortest_path",
             [](const runner::WorldBundle& w, int src, int dst) -> py::object {
                 const auto p = navgraph::shortest_path(w.graph, src, dst);
                 if (!p) return py::none();
                 return py::make_tuple(p->node_ids, p->total_length());
             })
        .def("node_position", [](const runner::WorldBundle& w, int id) {
            const auto& n = w.graph.node(id);
            return py::make_tuple(n.pos.x, n.pos.y);
        });

    m.def("generate_world",
          [](const std::string& config_json) {
              return runner::generate_world(config_from_str(config_json));
          },
          py::arg("config_json") = "");
    m.def("save_world",
          [](const runner::WorldBundle& w, const std::string& config_json,
             const std::string& out_dir) {
              runner::save_world(w, config_from_str(config_json), out_dir);
          });
    m.def("load_world", &runner::load_world);

    m.def("rollout", &rollout_json, py::arg("world"), py::arg("config_json") = "",
          py::arg("episodes") = 10, py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("run_scripted_episode", &replay_json, py::arg("world"), py::arg("config_json") = "",
          py::arg("seed") = 0);
    m.def("filter_terrain", &filter_terrain_json, py::arg("config_json") = "",
          py::arg("generations") = 10);

    m.def("spl", [](const std::vector<std::tuple<bool, double, double>>& episodes) {
        std::vector<eval::EpisodeResult> rs;
        for (const auto& [success, shortest, traveled] : episodes)
            rs.push_back({success, shortest, traveled, 0.0});
        return eval::spl(rs);
    });

    m.def("beta_log_prob", [](double x, double alpha, double beta) {
        return agent::beta_log_prob(x, {alpha, beta});
    });
    m.def("beta_sample",
          [](double alpha, double beta, uint64_t seed, int n) {
              Rng rng(seed);
              std::vector<double> out;
              out.reserve(static_cast<size_t>(n));
              for (int i = 0; i < n; ++i) out.push_back(agent::beta_sample({alpha, beta}, rng));
              return out;
          },
          py::arg("alpha"), py::arg("beta"), py::arg("seed") = 0, py::arg("n") = 1);

    m.def("wfc_generate", [](const std::string& config_json) {
        // map-only generation: tiles plus dimensions, no terrain or graph
        const auto cfg = config_from_str(config_json);
        const auto cat = worldgen::build_tile_catalog(io::default_example_grid(),
                                                      io::default_tile_kinds());
        const auto map = worldgen::wfc_generate(cat, cfg.world_width, cfg.world_height, cfg.seed);
        return py::make_tuple(map.width, map.height, map.cells);
    });
}
