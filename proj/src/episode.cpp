#include "navsim/episode.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"

namespace navsim::episode {

const char* done_reason_name(DoneReason r) {
    switch (r) {
        case DoneReason::None: return "None";
        case DoneReason::GoalReached: return "GoalReached";
        case DoneReason::Timeout: return "Timeout";
        case DoneReason::Collision: return "Collision";
    }
    return "?";
}

void advance_obstacles(std::vector<DynamicObstacle>& obstacles, const Vec2& robot_pos, double dt,
                       double standoff) {
    for (DynamicObstacle& o : obstacles) {
        const Vec2 to_robot = robot_pos - o.pos;
        const double d = to_robot.norm();
        if (d <= standoff || d <= 1e-12) continue;
        const double move = std::min(o.speed * dt, d - standoff);
        o.pos += to_robot.normalized() * move;
    }
}

namespace {

bool inside_footprint(const DynamicObstacle& o, const Vec2& p, double inflate) {
    return std::abs(p.x - o.pos.x) <= 0.5 * o.extents.x + inflate &&
           std::abs(p.y - o.pos.y) <= 0.5 * o.extents.y + inflate;
}

}  // namespace

double augmented_height(const terrain::HeightField& field,
                        const std::vector<DynamicObstacle>& obstacles, const Vec2& point,
                        double human_buffer_radius) {
    const double base = field.sample(point);
    double offset = 0.0;
    for (const DynamicObstacle& o : obstacles)
        if (inside_footprint(o, point, human_buffer_radius))
            offset = std::max(offset, o.height);  // overlap takes the max, not the sum
    return base + offset;
}

terrain::HeightField rasterize_obstacles(const terrain::HeightField& window,
                                         const std::vector<DynamicObstacle>& obstacles,
                                         double human_buffer_radius) {
    terrain::HeightField out = window;
    for (int iy = 0; iy < out.height; ++iy) {
        for (int ix = 0; ix < out.width; ++ix) {
            const Vec2 p = out.origin + Vec2{ix * out.resolution, iy * out.resolution};
            out.at(ix, iy) = static_cast<float>(
                augmented_height(window, obstacles, p, human_buffer_radius));
        }
    }
    return out;
}

void update_position_buffer(PositionBuffer& buffer, const Vec2& robot_pos) {
    if (buffer.entries.empty()) {
        buffer.entries.push_back({robot_pos, 1});
        return;
    }
    if (distance(robot_pos, buffer.entries.back().pos) >= buffer.spacing) {
        buffer.entries.push_back({robot_pos, 1});
        if (static_cast<int>(buffer.entries.size()) > buffer.capacity)
            buffer.entries.erase(buffer.entries.begin());
        return;
    }
    // revisit: bump the nearest entry within the spacing radius
    int nearest = -1;
    double best = buffer.spacing;
    for (size_t i = 0; i < buffer.entries.size(); ++i) {
        const double d = distance(robot_pos, buffer.entries[i].pos);
        if (d < best) {
            best = d;
            nearest = static_cast<int>(i);
        }
    }
    if (nearest >= 0) buffer.entries[static_cast<size_t>(nearest)].visit_steps += 1;
}

agent::VelocityCommand sample_llc_command(Rng& rng, const agent::VelocityCommand& current,
                                          double resample_prob) {
    if (!rng.bernoulli(resample_prob)) return current;
    agent::VelocityCommand c;
    c.vx = rng.uniform(-2.5, 2.5);
    c.vy = rng.uniform(-1.2, 1.2);
    c.wz = rng.uniform(-1.5, 1.5);
    return c;
}

Episode::Episode(const terrain::HeightField& field, const navgraph::NavGraph& graph,
                 EpisodeConfig cfg)
    : field_(field), graph_(graph), cfg_(std::move(cfg)) {}

EpisodeState& Episode::reset(uint64_t seed) {
    state_ = EpisodeState{};
    state_.rng.reseed(seed);
    Rng& rng = state_.rng;

    state_.path = navgraph::sample_episode_path(graph_, rng, cfg_.path_min_len, cfg_.path_max_len);
    state_.lookahead = rng.uniform(cfg_.lookahead_min, cfg_.lookahead_max);

    state_.proxy = agent::ProxyState{};
    state_.proxy.pos = graph_.node(state_.path.node_ids.front()).pos;
    state_.proxy.yaw = rng.uniform(-M_PI, M_PI);
    state_.proxy.z = field_.sample(state_.proxy.pos);

    state_.waypoints =
        navgraph::waypoints_from_path(state_.path, graph_, state_.proxy.pos, state_.lookahead);
    state_.prev_waypoints = {state_.waypoints, state_.waypoints};

    state_.buffer.capacity = cfg_.buffer_capacity;
    state_.buffer.spacing = cfg_.record_spacing;
    update_position_buffer(state_.buffer, state_.proxy.pos);

    const int n_obstacles = rng.uniform_int(cfg_.obstacle_count_min, cfg_.obstacle_count_max);
    const double world_w = field_.width * field_.resolution;
    const double world_h = field_.height * field_.resolution;
    for (int i = 0; i < n_obstacles; ++i) {
        DynamicObstacle o;
        o.pos = {rng.uniform(0.0, world_w), rng.uniform(0.0, world_h)};
        o.extents = {rng.uniform(cfg_.obstacle_extent_min, cfg_.obstacle_extent_max),
                     rng.uniform(cfg_.obstacle_extent_min, cfg_.obstacle_extent_max)};
        o.speed = rng.uniform(cfg_.obstacle_speed_min, cfg_.obstacle_speed_max);
        o.height = cfg_.obstacle_height;
        // never spawn on top of the robot
        if (distance(o.pos, state_.proxy.pos) < 2.0) o.pos += Vec2{2.0, 2.0};
        state_.obstacles.push_back(o);
    }
    return state_;
}

Vec2 Episode::goal() const { return graph_.node(state_.path.node_ids.back()).pos; }

StepRecord Episode::step(const agent::VelocityCommand& hl_action,
                         const rewards::RewardWeights& weights) {
    if (state_.done) throw SteppingDoneEpisode();

    // scan history shifts at hl rate
    bool oof = false;
    std::vector<float> current_scan = sample_scan(oof);
    state_.scan_history_2 = state_.scan_history_1.empty() ? current_scan : state_.scan_history_1;
    state_.scan_history_1 = current_scan;

    for (int s = 0; s < cfg_.substeps(); ++s) {
        state_.proxy = agent::proxy_step(state_.proxy, hl_action, field_, cfg_.ll_dt, cfg_.proxy);
        advance_obstacles(state_.obstacles, state_.proxy.pos, cfg_.ll_dt, cfg_.obstacle_standoff);
    }
    state_.hl_steps += 1;
    state_.elapsed = state_.hl_steps * cfg_.hl_dt;

    update_position_buffer(state_.buffer, state_.proxy.pos);

    state_.prev_waypoints[1] = state_.prev_waypoints[0];
    state_.prev_waypoints[0] = state_.waypoints;
    state_.waypoints =
        navgraph::waypoints_from_path(state_.path, graph_, state_.proxy.pos, state_.lookahead);

    state_.action_history[2] = state_.action_history[1];
    state_.action_history[1] = state_.action_history[0];
    state_.action_history[0] = hl_action;

    // rewards
    const Vec2 v_world = Vec2{state_.proxy.vel.vx, state_.proxy.vel.vy}.rotated(state_.proxy.yaw);
    rewards::RewardBreakdown breakdown;
    breakdown.hl = rewards::hl_reward_terms(state_.proxy.pos, v_world, state_.waypoints.wp1,
                                            state_.buffer.entries);
    rewards::BodyState body;
    body.velocity_world = v_world;
    body.velocity_body = {state_.proxy.vel.vx, state_.proxy.vel.vy};
    body.wz = state_.proxy.vel.wz;
    body.base_height = cfg_.base_height;
    breakdown.ll = rewards::ll_reward_terms(body, {hl_action.vx, hl_action.vy}, hl_action.wz);
    breakdown.reg = rewards::regularization_terms(rewards::JointState{}, false, weights);
    rewards::compose_reward(breakdown, weights, rewards::Level::High);

    // termination
    if (distance(state_.proxy.pos, goal()) < cfg_.goal_radius) {
        state_.done = true;
        state_.reason = DoneReason::GoalReached;
    } else if (state_.elapsed >= cfg_.max_episode_s) {
        state_.done = true;
        state_.reason = DoneReason::Timeout;
    } else {
        for (const DynamicObstacle& o : state_.obstacles) {
            if (inside_footprint(o, state_.proxy.pos, cfg_.proxy.radius)) {
                state_.done = true;
                state_.reason = DoneReason::Collision;
                break;
            }
        }
    }

    StepRecord rec;
    rec.t = state_.elapsed;
    rec.pos = state_.proxy.pos;
    rec.yaw = state_.proxy.yaw;
    rec.action = hl_action;
    rec.wp1 = state_.waypoints.wp1;
    rec.wp2 = state_.waypoints.wp2;
    rec.reward = breakdown;
    rec.done = state_.done;
    rec.reason = state_.reason;
    return rec;
}

std::vector<float> Episode::sample_scan(bool& out_of_field) const {
    const ScanSpec& s = cfg_.scan;
    std::vector<float> scan(static_cast<size_t>(s.nx()) * s.ny());
    const double ref = field_.sample(state_.proxy.pos) + cfg_.base_height;
    size_t i = 0;
    for (int iy = 0; iy < s.ny(); ++iy) {
        for (int ix = 0; ix < s.nx(); ++ix) {
            const Vec2 local{s.x_min + ix * s.pitch, s.y_min + iy * s.pitch};
            const Vec2 world = state_.proxy.pos + local.rotated(state_.proxy.yaw);
            if (!field_.contains(world)) out_of_field = true;  // edge-clamped below
            scan[i++] = static_cast<float>(
                augmented_height(field_, state_.obstacles, world, cfg_.human_buffer_radius) - ref);
        }
    }
    return scan;
}

HLObservation Episode::observation() const {
    HLObservation obs;
    bool oof = false;
    obs.scan = sample_scan(oof);
    obs.out_of_field = oof;
    obs.scan_prev1 = state_.scan_history_1.empty() ? obs.scan : state_.scan_history_1;
    obs.scan_prev2 = state_.scan_history_2.empty() ? obs.scan_prev1 : state_.scan_history_2;

    obs.llc_state = {state_.proxy.vel.vx, state_.proxy.vel.vy, state_.proxy.vel.wz,
                     state_.proxy.last_tracking_error, state_.proxy.last_slope};

    auto to_robot_frame = [&](const Vec2& world) {
        return (world - state_.proxy.pos).rotated(-state_.proxy.yaw);
    };

    obs.position_history.reserve(state_.buffer.entries.size());
    for (const auto& e : state_.buffer.entries) {
        const Vec2 rel = to_robot_frame(e.pos);
        obs.position_history.push_back({rel.x, rel.y, static_cast<double>(e.visit_steps)});
    }

    obs.wp1_rf = to_robot_frame(state_.waypoints.wp1);
    obs.wp2_rf = to_robot_frame(state_.waypoints.wp2);
    obs.prev_waypoints_rf = {to_robot_frame(state_.prev_waypoints[0].wp1),
                             to_robot_frame(state_.prev_waypoints[0].wp2),
                             to_robot_frame(state_.prev_waypoints[1].wp1),
                             to_robot_frame(state_.prev_waypoints[1].wp2)};
    obs.action_history = state_.action_history;
    return obs;
}

}  // namespace navsim::episode
