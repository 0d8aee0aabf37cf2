#include "navsim/navgraph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "navsim/errors.hpp"

namespace navsim::navgraph {

using worldgen::TileCategory;

void NavGraph::rebuild_index() {
    int max_id = -1;
    for (const Node& n : nodes) max_id = std::max(max_id, n.id);
    adj_.assign(static_cast<size_t>(max_id + 1), {});
    for (const Edge& e : edges) {
        adj_[static_cast<size_t>(e.a)].emplace_back(e.b, e.length);
        adj_[static_cast<size_t>(e.b)].emplace_back(e.a, e.length);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
}

const std::vector<std::pair<int, double>>& NavGraph::neighbors(int node_id) const {
    if (node_id < 0 || static_cast<size_t>(node_id) >= adj_.size()) throw UnknownNode(node_id);
    return adj_[static_cast<size_t>(node_id)];
}

bool NavGraph::has_node(int id) const {
    return std::any_of(nodes.begin(), nodes.end(), [id](const Node& n) { return n.id == id; });
}

const Node& NavGraph::node(int id) const {
    for (const Node& n : nodes)
        if (n.id == id) return n;
    throw UnknownNode(id);
}

namespace {

bool connects_along(TileCategory c, worldgen::Axis axis) {
    switch (c) {
        case TileCategory::Obstacle: return false;
        case TileCategory::StairX: return axis == worldgen::Axis::X;
        case TileCategory::StairY: return axis == worldgen::Axis::Y;
        default: return true;
    }
}

}  // namespace

NavGraph build_nav_graph(const worldgen::TileMap& map, const worldgen::TileCatalog& catalog,
                         const terrain::TerrainParams& params, double tile_edge) {
    if (!validate_adjacency(map, catalog).empty())
        throw IllegalMap("adjacency violations present");

    NavGraph g;
    auto category = [&](int tx, int ty) {
        return catalog.kinds[static_cast<size_t>(catalog.kind_index(map.at(tx, ty)))].category;
    };
    auto tile_id = [&](int tx, int ty) { return ty * map.width + tx; };

    for (int ty = 0; ty < map.height; ++ty) {
        for (int tx = 0; tx < map.width; ++tx) {
            const TileCategory c = category(tx, ty);
            if (c == TileCategory::Obstacle) continue;
            Node n;
            n.id = tile_id(tx, ty);
            n.pos = {(tx + 0.5) * tile_edge, (ty + 0.5) * tile_edge};
            n.elevation = terrain::tile_base_elevation(c, params, tile_edge);
            g.nodes.push_back(n);
        }
    }

    for (int ty = 0; ty < map.height; ++ty) {
        for (int tx = 0; tx < map.width; ++tx) {
            const TileCategory c = category(tx, ty);
            if (c == TileCategory::Obstacle) continue;
            // +x neighbor
            if (tx + 1 < map.width) {
                const TileCategory cn = category(tx + 1, ty);
                if (cn != TileCategory::Obstacle &&
                    connects_along(c, worldgen::Axis::X) &&
                    connects_along(cn, worldgen::Axis::X) &&
                    catalog.allowed(map.at(tx, ty), map.at(tx + 1, ty), worldgen::Axis::X))
                    g.edges.push_back({tile_id(tx, ty), tile_id(tx + 1, ty), tile_edge});
            }
            // +y neighbor
            if (ty + 1 < map.height) {
                const TileCategory cn = category(tx, ty + 1);
                if (cn != TileCategory::Obstacle &&
                    connects_along(c, worldgen::Axis::Y) &&
                    connects_along(cn, worldgen::Axis::Y) &&
                    catalog.allowed(map.at(tx, ty), map.at(tx, ty + 1), worldgen::Axis::Y))
                    g.edges.push_back({tile_id(tx, ty), tile_id(tx, ty + 1), tile_edge});
            }
        }
    }
    g.rebuild_index();
    return g;
}

std::optional<Path> shortest_path(const NavGraph& graph, int src, int dst) {
    if (!graph.has_node(src)) throw UnknownNode(src);
    if (!graph.has_node(dst)) throw UnknownNode(dst);

    int max_id = 0;
    for (const Node& n : graph.nodes) max_id = std::max(max_id, n.id);
    std::vector<double> dist(static_cast<size_t>(max_id + 1), 1e300);
    std::vector<int> prev(static_cast<size_t>(max_id + 1), -1);

    using QueueItem = std::pair<double, int>;
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> pq;
    dist[static_cast<size_t>(src)] = 0.0;
    pq.emplace(0.0, src);

    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(u)]) continue;
        if (u == dst) break;
        for (const auto& [v, len] : graph.neighbors(u)) {
            const double nd = d + len;
            auto& dv = dist[static_cast<size_t>(v)];
            auto& pv = prev[static_cast<size_t>(v)];
            // equal-cost ties resolved toward the smaller predecessor id
            if (nd < dv || (nd == dv && pv >= 0 && u < pv)) {
                dv = nd;
                pv = u;
                pq.emplace(nd, v);
            }
        }
    }

    if (dist[static_cast<size_t>(dst)] >= 1e300) return std::nullopt;

    Path p;
    for (int at = dst; at != -1; at = prev[static_cast<size_t>(at)]) p.node_ids.push_back(at);
    std::reverse(p.node_ids.begin(), p.node_ids.end());
    p.cum_length.resize(p.node_ids.size());
    p.cum_length[0] = 0.0;
    for (size_t i = 1; i < p.node_ids.size(); ++i)
        p.cum_length[i] = p.cum_length[i - 1] +
                          distance(graph.node(p.node_ids[i - 1]).pos, graph.node(p.node_ids[i]).pos);
    return p;
}

Path sample_episode_path(const NavGraph& graph, Rng& rng, double min_len, double max_len,
                         int max_tries) {
    if (graph.nodes.empty()) throw NoQualifyingPath();
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        const int src = graph.nodes[rng.uniform_index(graph.nodes.size())].id;
        const int dst = graph.nodes[rng.uniform_index(graph.nodes.size())].id;
        auto path = shortest_path(graph, src, dst);
        if (!path) continue;
        const double l = path->total_length();
        if (l >= min_len && l <= max_len) return *path;
    }
    throw NoQualifyingPath();
}

Vec2 Path::point_at(double s, const NavGraph& g) const {
    if (node_ids.empty()) throw EmptyPath();
    if (node_ids.size() == 1 || s <= 0.0) return g.node(node_ids.front()).pos;
    if (s >= total_length()) return g.node(node_ids.back()).pos;
    for (size_t i = 1; i < node_ids.size(); ++i) {
        if (s <= cum_length[i]) {
            const double seg = cum_length[i] - cum_length[i - 1];
            const double t = seg > 0.0 ? (s - cum_length[i - 1]) / seg : 0.0;
            const Vec2 a = g.node(node_ids[i - 1]).pos;
            const Vec2 b = g.node(node_ids[i]).pos;
            return a + (b - a) * t;
        }
    }
    return g.node(node_ids.back()).pos;
}

std::pair<double, Vec2> project_onto_path(const Path& path, const NavGraph& graph,
                                          const Vec2& pos) {
    if (path.node_ids.empty()) throw EmptyPath();
    if (path.node_ids.size() == 1)
        return {0.0, graph.node(path.node_ids.front()).pos};

    double best_d = 1e300, best_s = 0.0;
    Vec2 best_p = graph.node(path.node_ids.front()).pos;
    for (size_t i = 1; i < path.node_ids.size(); ++i) {
        const Vec2 a = graph.node(path.node_ids[i - 1]).pos;
        const Vec2 b = graph.node(path.node_ids[i]).pos;
        const Vec2 ab = b - a;
        const double len_sq = ab.norm_sq();
        const double t = len_sq > 0.0 ? clamp((pos - a).dot(ab) / len_sq, 0.0, 1.0) : 0.0;
        const Vec2 proj = a + ab * t;
        const double d = distance(pos, proj);
        // ties keep the earlier segment (smaller arc-length)
        if (d < best_d - 1e-12) {
            best_d = d;
            best_p = proj;
            best_s = path.cum_length[i - 1] + t * std::sqrt(len_sq);
        }
    }
    return {best_s, best_p};
}

WaypointPair waypoints_from_path(const Path& path, const NavGraph& graph, const Vec2& robot_pos,
                                 double lookahead) {
    if (path.node_ids.empty()) throw EmptyPath();
    const auto [s_star, proj] = project_onto_path(path, graph, robot_pos);
    (void)proj;
    const double total = path.total_length();
    WaypointPair wp;
    wp.lookahead = lookahead;
    wp.wp1 = path.point_at(std::min(s_star + lookahead, total), graph);
    wp.wp2 = path.point_at(std::min(s_star + 2.0 * lookahead, total), graph);
    return wp;
}

AnchorPursuit::AnchorPursuit(Path path, double switch_radius, double lookahead)
    : path_(std::move(path)), switch_radius_(switch_radius), lookahead_(lookahead) {
    if (path_.node_ids.empty()) throw EmptyPath();
}

Vec2 AnchorPursuit::next_waypoint(const NavGraph& graph, const Vec2& robot_pos) {
    const int last = static_cast<int>(path_.node_ids.size()) - 1;
    const Vec2 anchor = graph.node(path_.node_ids[static_cast<size_t>(next_anchor_)]).pos;
    if (distance(robot_pos, anchor) < switch_radius_) {
        // anchor approached; mark passed and hand it out as the waypoint
        if (next_anchor_ < last) ++next_anchor_;
        return anchor;
    }
    const auto [s_star, proj] = project_onto_path(path_, graph, robot_pos);
    (void)proj;
    // never target beyond the next un-passed anchor, so it cannot be skipped
    const double anchor_s = path_.cum_length[static_cast<size_t>(next_anchor_)];
    const double target_s = std::min(s_star + lookahead_, anchor_s);
    return path_.point_at(target_s, graph);
}

}  // namespace navsim::navgraph
