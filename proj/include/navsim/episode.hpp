#pragma once

#include <array>
#include <string>
#include <vector>

#include "navsim/agent.hpp"
#include "navsim/geometry.hpp"
#include "navsim/navgraph.hpp"
#include "navsim/rewards.hpp"
#include "navsim/rng.hpp"
#include "navsim/terrain.hpp"

namespace navsim::episode {

struct ScanSpec {
    double x_min = -1.5, x_max = 3.0;  // m, robot frame (forward = +x)
    double y_min = -1.5, y_max = 1.5;
    double pitch = 0.15;  // m

    int nx() const { return static_cast<int>(std::lround((x_max - x_min) / pitch)) + 1; }
    int ny() const { return static_cast<int>(std::lround((y_max - y_min) / pitch)) + 1; }
};

struct EpisodeConfig {
    double hl_dt = 0.1;
    double ll_dt = 0.02;
    double max_episode_s = 15.0;     // 60.0 for evaluation
    double goal_radius = 0.75;       // 0.5 for evaluation
    double gamma_hl = 0.991;         // metadata only
    double gamma_ll = 0.99;          // metadata only

    int obstacle_count_min = 0;
    int obstacle_count_max = 4;
    double obstacle_speed_min = 0.1;   // m/s
    double obstacle_speed_max = 0.5;
    double obstacle_extent_min = 0.3;  // m
    double obstacle_extent_max = 1.0;
    double obstacle_height = 1.0;      // m
    double obstacle_standoff = 0.3;    // m, approach halt distance
    double human_buffer_radius = 0.5;  // m, footprint inflation in scans

    double path_min_len = 5.0;   // m
    double path_max_len = 20.0;
    double lookahead_min = 5.0;  // m, per-episode U[5, 20] draw
    double lookahead_max = 20.0;

    double base_height = 0.55;       // m, scan reference offset
    double resample_prob = 0.005;    // per ll-step command resampling
    double record_spacing = 0.5;     // m, position buffer
    int buffer_capacity = 20;

    agent::ProxyConfig proxy;
    agent::ActionBounds bounds;
    ScanSpec scan;

    int substeps() const { return static_cast<int>(std::lround(hl_dt / ll_dt)); }
};

struct PositionBuffer {
    std::vector<rewards::BufferEntry> entries;  // oldest first
    int capacity = 20;
    double spacing = 0.5;
};

struct DynamicObstacle {
    Vec2 pos;
    Vec2 extents;   // box half-sizes would be ambiguous; these are full widths
    double speed = 0.0;  // m/s, toward the robot
    double height = 1.0;
};

struct HLObservation {
    std::vector<float> scan;         // current, row-major ny x nx
    std::vector<float> scan_prev1;   // t - 0.1 s
    std::vector<float> scan_prev2;   // t - 0.2 s
    std::array<double, 5> llc_state{};  // vx, vy, wz, tracking error, slope
    std::vector<std::array<double, 3>> position_history;  // rel x, rel y, visit_steps
    Vec2 wp1_rf, wp2_rf;                                  // robot frame
    std::array<Vec2, 4> prev_waypoints_rf{};              // two previous pairs
    std::array<agent::VelocityCommand, 3> action_history{};
    bool out_of_field = false;
};

enum class DoneReason { None, GoalReached, Timeout, Collision };
const char* done_reason_name(DoneReason r);

struct EpisodeState {
    agent::ProxyState proxy;
    navgraph::Path path;
    double lookahead = 5.0;
    navgraph::WaypointPair waypoints;
    std::array<navgraph::WaypointPair, 2> prev_waypoints{};
    PositionBuffer buffer;
    std::vector<DynamicObstacle> obstacles;
    std::array<agent::VelocityCommand, 3> action_history{};
    std::vector<float> scan_history_1, scan_history_2;
    int hl_steps = 0;
    double elapsed = 0.0;
    Rng rng{0};
    bool done = false;
    DoneReason reason = DoneReason::None;
};

struct StepRecord {
    double t = 0.0;
    Vec2 pos;
    double yaw = 0.0;
    agent::VelocityCommand action;
    Vec2 wp1, wp2;
    rewards::RewardBreakdown reward;
    bool done = false;
    DoneReason reason = DoneReason::None;
};

// Free operations (spec surface); Episode below wires them into the loop.
void advance_obstacles(std::vector<DynamicObstacle>& obstacles, const Vec2& robot_pos, double dt,
                       double standoff = 0.3);

terrain::HeightField rasterize_obstacles(const terrain::HeightField& window,
                                         const std::vector<DynamicObstacle>& obstacles,
                                         double human_buffer_radius = 0.5);

// Obstacle-augmented height at a single world point (max semantics on overlap).
double augmented_height(const terrain::HeightField& field,
                        const std::vector<DynamicObstacle>& obstacles, const Vec2& point,
                        double human_buffer_radius = 0.5);

void update_position_buffer(PositionBuffer& buffer, const Vec2& robot_pos);

agent::VelocityCommand sample_llc_command(Rng& rng, const agent::VelocityCommand& current,
                                          double resample_prob = 0.005);

class Episode {
public:
    Episode(const terrain::HeightField& field, const navgraph::NavGraph& graph,
            EpisodeConfig cfg);

    // Fresh path, waypoints, obstacles, buffer; robot at the path start.
    EpisodeState& reset(uint64_t seed);

    // One HLC step: proxy substeps, obstacle motion, buffer and waypoint
    // updates, rewards, termination.
    StepRecord step(const agent::VelocityCommand& hl_action,
                    const rewards::RewardWeights& weights = rewards::RewardWeights{});

    HLObservation observation() const;

    const EpisodeState& state() const { return state_; }
    EpisodeState& state() { return state_; }
    const EpisodeConfig& config() const { return cfg_; }
    const terrain::HeightField& field() const { return field_; }
    const navgraph::NavGraph& graph() const { return graph_; }

    // Final path node (the episode goal).
    Vec2 goal() const;

private:
    std::vector<float> sample_scan(bool& out_of_field) const;

    const terrain::HeightField& field_;
    const navgraph::NavGraph& graph_;
    EpisodeConfig cfg_;
    EpisodeState state_;
};

}  // namespace navsim::episode
