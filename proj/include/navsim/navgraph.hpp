#pragma once

#include <optional>
#include <vector>

#include "navsim/geometry.hpp"
#include "navsim/rng.hpp"
#include "navsim/terrain.hpp"
#include "navsim/worldgen.hpp"

namespace navsim::navgraph {

struct Node {
    int id = 0;
    Vec2 pos;           // world xy at tile center
    double elevation = 0.0;
};

struct Edge {
    int a = 0;
    int b = 0;
    double length = 0.0;  // horizontal Euclidean, m
};

class NavGraph {
public:
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    void rebuild_index();
    const std::vector<std::pair<int, double>>& neighbors(int node_id) const;
    const Node& node(int id) const;
    bool has_node(int id) const;

private:
    std::vector<std::vector<std::pair<int, double>>> adj_;  // indexed by node id
};

struct Path {
    std::vector<int> node_ids;
    std::vector<double> cum_length;  // arc-length at each node, cum_length[0] = 0
    double total_length() const { return cum_length.empty() ? 0.0 : cum_length.back(); }

    // Polyline point at a given arc-length (clamped to [0, total]).
    Vec2 point_at(double s, const NavGraph& g) const;
};

struct WaypointPair {
    Vec2 wp1;
    Vec2 wp2;
    double lookahead = 0.0;
};

// Node per non-Obstacle tile; edges where catalog adjacency permits and the
// categories are compatible (stairs connect only along their own axis).
NavGraph build_nav_graph(const worldgen::TileMap& map, const worldgen::TileCatalog& catalog,
                         const terrain::TerrainParams& params, double tile_edge = 2.0);

// Dijkstra with deterministic smaller-id tie-break. nullopt = unreachable.
std::optional<Path> shortest_path(const NavGraph& graph, int src, int dst);

// Rejection-sample endpoint pairs until the geodesic length lands in
// [min_len, max_len]. Throws NoQualifyingPath after the retry budget.
Path sample_episode_path(const NavGraph& graph, Rng& rng, double min_len, double max_len,
                         int max_tries = 1000);

// (arc-length of the global closest point, the point itself)
std::pair<double, Vec2> project_onto_path(const Path& path, const NavGraph& graph,
                                          const Vec2& pos);

// Training waypoints: wp1 at s* + d, wp2 at s* + 2d, clamped to the path end.
WaypointPair waypoints_from_path(const Path& path, const NavGraph& graph, const Vec2& robot_pos,
                                 double lookahead);

// Deployment waypoint selector. Stateful: nodes are marked passed only once
// approached within switch_radius, so anchors can never be skipped.
class AnchorPursuit {
public:
    AnchorPursuit(Path path, double switch_radius = 3.0, double lookahead = 3.0);

    Vec2 next_waypoint(const NavGraph& graph, const Vec2& robot_pos);
    int next_anchor_index() const { return next_anchor_; }

private:
    Path path_;
    double switch_radius_;
    double lookahead_;
    int next_anchor_ = 0;  // first un-passed node index along the path
};

}  // namespace navsim::navgraph
