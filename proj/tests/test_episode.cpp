#include <doctest.h>

#include <cmath>

#include "navsim/episode.hpp"
#include "navsim/errors.hpp"

using namespace navsim;
using namespace navsim::episode;

namespace {

struct FlatWorld {
    terrain::HeightField field;
    navgraph::NavGraph graph;

    FlatWorld() {
        field.resolution = 0.1;
        field.origin = {0.05, 0.05};
        field.width = 300;   // 30 m x 30 m
        field.height = 300;
        field.data.assign(90000, 0.0f);
        field.friction.assign(90000, 0.8f);
        // straight corridor of nodes through the middle, 2 m apart
        for (int i = 0; i < 13; ++i)
            graph.nodes.push_back({i, {2.0 + 2.0 * i, 15.0}, 0.0});
        for (int i = 0; i + 1 < 13; ++i) graph.edges.push_back({i, i + 1, 2.0});
        graph.rebuild_index();
    }
};

EpisodeConfig quiet_config() {
    EpisodeConfig cfg;
    cfg.obstacle_count_min = cfg.obstacle_count_max = 0;
    return cfg;
}

}  // namespace

TEST_CASE("obstacles walk toward the robot and halt at the standoff") {
    std::vector<DynamicObstacle> obs = {{{0.0, 0.0}, {0.5, 0.5}, 1.0, 1.0}};
    const Vec2 robot{10.0, 0.0};
    advance_obstacles(obs, robot, 0.5);
    CHECK(obs[0].pos.x == doctest::Approx(0.5));
    CHECK(obs[0].pos.y == doctest::Approx(0.0));
    // never crosses the standoff ring even with a huge step
    advance_obstacles(obs, robot, 1000.0);
    CHECK(distance(obs[0].pos, robot) == doctest::Approx(0.3));
    advance_obstacles(obs, robot, 1.0);
    CHECK(distance(obs[0].pos, robot) == doctest::Approx(0.3));
    // degenerate: obstacle exactly on the robot stays put
    std::vector<DynamicObstacle> on_top = {{robot, {0.5, 0.5}, 1.0, 1.0}};
    advance_obstacles(on_top, robot, 1.0);
    CHECK(on_top[0].pos.x == robot.x);
}

TEST_CASE("augmented height: max semantics and footprint inflation") {
    terrain::HeightField f;
    f.resolution = 1.0;
    f.origin = {0.5, 0.5};
    f.width = f.height = 10;
    f.data.assign(100, 0.2f);
    f.friction.assign(100, 0.8f);

    std::vector<DynamicObstacle> obs = {{{5.0, 5.0}, {1.0, 1.0}, 0.0, 1.0},
                                        {{5.2, 5.0}, {1.0, 1.0}, 0.0, 0.6}};
    // overlap takes the taller obstacle, not the sum
    CHECK(augmented_height(f, obs, {5.0, 5.0}, 0.0) == doctest::Approx(1.2));
    // inflation widens the footprint by the human buffer radius
    CHECK(augmented_height(f, obs, {6.0, 5.0}, 0.5) == doctest::Approx(1.2));
    CHECK(augmented_height(f, obs, {7.5, 5.0}, 0.5) == doctest::Approx(0.2));
    // rasterized window agrees pointwise
    const auto win = rasterize_obstacles(f, obs, 0.5);
    CHECK(win.sample({5.0, 5.0}) == doctest::Approx(1.2));
    CHECK(win.sample({9.0, 9.0}) == doctest::Approx(0.2));
}

TEST_CASE("position buffer: spacing, revisit bumps, FIFO eviction") {
    PositionBuffer buf;
    update_position_buffer(buf, {0.0, 0.0});
    REQUIRE(buf.entries.size() == 1);
    // closer than the spacing: bump, don't push
    update_position_buffer(buf, {0.3, 0.0});
    REQUIRE(buf.entries.size() == 1);
    CHECK(buf.entries[0].visit_steps == 2);
    // at or past the spacing: push
    update_position_buffer(buf, {0.5, 0.0});
    REQUIRE(buf.entries.size() == 2);
    CHECK(buf.entries[1].visit_steps == 1);
    // march far enough to overflow the 20-entry capacity
    for (int i = 0; i < 30; ++i)
        update_position_buffer(buf, {1.0 + 0.5 * i, 0.0});
    CHECK(buf.entries.size() == 20);
    // oldest entries were evicted
    for (const auto& e : buf.entries) CHECK(e.pos.x > 5.0);
    // consecutive entries respect the spacing
    for (size_t i = 1; i < buf.entries.size(); ++i)
        CHECK(distance(buf.entries[i].pos, buf.entries[i - 1].pos) >= buf.spacing - 1e-9);
}

TEST_CASE("llc command resampling: never at p=0, always at p=1, bounded") {
    Rng rng(9);
    const agent::VelocityCommand cur{0.5, 0.1, -0.2};
    for (int i = 0; i < 50; ++i) {
        const auto c = sample_llc_command(rng, cur, 0.0);
        CHECK(c.vx == cur.vx);
        CHECK(c.vy == cur.vy);
        CHECK(c.wz == cur.wz);
    }
    int changed = 0;
    for (int i = 0; i < 200; ++i) {
        const auto c = sample_llc_command(rng, cur, 1.0);
        changed += (c.vx != cur.vx) ? 1 : 0;
        CHECK(std::abs(c.vx) <= 2.5);
        CHECK(std::abs(c.vy) <= 1.2);
        CHECK(std::abs(c.wz) <= 1.5);
    }
    CHECK(changed > 190);
}

TEST_CASE("reset places the robot on a qualifying path with fresh state") {
    FlatWorld w;
    Episode ep(w.field, w.graph, quiet_config());
    for (uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
        const auto& st = ep.reset(seed);
        CHECK(st.path.total_length() >= 5.0);
        CHECK(st.path.total_length() <= 20.0);
        CHECK(st.lookahead >= 5.0);
        CHECK(st.lookahead <= 20.0);
        const Vec2 start = w.graph.node(st.path.node_ids.front()).pos;
        CHECK(distance(st.proxy.pos, start) == doctest::Approx(0.0));
        CHECK(st.buffer.entries.size() == 1);
        CHECK(st.hl_steps == 0);
        CHECK_FALSE(st.done);
    }
}

TEST_CASE("obstacles spawn inside the field and away from the robot") {
    FlatWorld w;
    EpisodeConfig cfg;
    cfg.obstacle_count_min = 2;
    cfg.obstacle_count_max = 4;
    Episode ep(w.field, w.graph, cfg);
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const auto& st = ep.reset(seed);
        CHECK(st.obstacles.size() >= 2);
        CHECK(st.obstacles.size() <= 4);
        for (const auto& o : st.obstacles) {
            CHECK(distance(o.pos, st.proxy.pos) >= 2.0 - 1e-9);
            CHECK(o.speed >= 0.1);
            CHECK(o.speed <= 0.5);
            CHECK(o.extents.x >= 0.3);
            CHECK(o.extents.x <= 1.0);
            CHECK(o.height == 1.0);
        }
    }
}

TEST_CASE("stepping advances time, applies substeps, and refuses a done episode") {
    FlatWorld w;
    auto cfg = quiet_config();
    cfg.max_episode_s = 0.3;
    Episode ep(w.field, w.graph, cfg);
    ep.reset(4);
    auto r1 = ep.step({1.0, 0.0, 0.0});
    CHECK(r1.t == doctest::Approx(0.1));
    CHECK_FALSE(r1.done);
    auto r2 = ep.step({1.0, 0.0, 0.0});
    CHECK(r2.t == doctest::Approx(0.2));
    auto r3 = ep.step({1.0, 0.0, 0.0});
    CHECK(r3.t == doctest::Approx(0.3));
    CHECK(r3.done);
    CHECK(r3.reason == DoneReason::Timeout);
    CHECK_THROWS_AS(ep.step({0.0, 0.0, 0.0}), SteppingDoneEpisode);
}

TEST_CASE("goal termination fires inside the goal radius") {
    FlatWorld w;
    auto cfg = quiet_config();
    cfg.max_episode_s = 60.0;
    Episode ep(w.field, w.graph, cfg);
    ep.reset(8);
    // teleport the proxy next to the goal and take one step toward it
    ep.state().proxy.pos = ep.goal() - Vec2{0.8, 0.0};
    ep.state().proxy.yaw = 0.0;
    bool reached = false;
    for (int i = 0; i < 30 && !reached; ++i) {
        const auto r = ep.step({1.0, 0.0, 0.0});
        reached = r.done;
        if (r.done) CHECK(r.reason == DoneReason::GoalReached);
    }
    CHECK(reached);
}

TEST_CASE("collision with an obstacle footprint terminates the episode") {
    FlatWorld w;
    auto cfg = quiet_config();
    Episode ep(w.field, w.graph, cfg);
    ep.reset(3);
    DynamicObstacle o;
    o.pos = ep.state().proxy.pos + Vec2{0.1, 0.0};
    o.extents = {1.0, 1.0};
    o.speed = 0.0;
    ep.state().obstacles.push_back(o);
    const auto r = ep.step({0.0, 0.0, 0.0});
    CHECK(r.done);
    CHECK(r.reason == DoneReason::Collision);
}

TEST_CASE("scan geometry and base-relativity on flat ground") {
    FlatWorld w;
    Episode ep(w.field, w.graph, quiet_config());
    ep.reset(5);
    const auto obs = ep.observation();
    REQUIRE(obs.scan.size() == 31u * 21u);
    CHECK(ep.config().scan.nx() == 31);
    CHECK(ep.config().scan.ny() == 21);
    // flat terrain reads -base_height everywhere relative to the scan origin
    for (float h : obs.scan) CHECK(h == doctest::Approx(-0.55).epsilon(1e-6));
    CHECK(obs.scan_prev1 == obs.scan);
    CHECK(obs.scan_prev2 == obs.scan);
}

TEST_CASE("observation frames: waypoints and history transform into the robot frame") {
    FlatWorld w;
    Episode ep(w.field, w.graph, quiet_config());
    ep.reset(6);
    ep.state().proxy.pos = {10.0, 15.0};
    ep.state().proxy.yaw = M_PI / 2.0;
    ep.state().waypoints.wp1 = {10.0, 18.0};  // 3 m ahead of a +y-facing robot
    const auto obs = ep.observation();
    CHECK(obs.wp1_rf.x == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(obs.wp1_rf.y == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(obs.llc_state[0] == ep.state().proxy.vel.vx);
    CHECK(obs.position_history.size() == ep.state().buffer.entries.size());
}

TEST_CASE("episodes are bit-deterministic in the seed") {
    FlatWorld w;
    EpisodeConfig cfg;
    cfg.obstacle_count_min = 1;
    cfg.obstacle_count_max = 3;
    Episode a(w.field, w.graph, cfg), b(w.field, w.graph, cfg);
    a.reset(99);
    b.reset(99);
    for (int i = 0; i < 40; ++i) {
        const auto ra = a.step({1.2, 0.1, 0.3});
        const auto rb = b.step({1.2, 0.1, 0.3});
        CHECK(ra.pos.x == rb.pos.x);
        CHECK(ra.pos.y == rb.pos.y);
        CHECK(ra.yaw == rb.yaw);
        CHECK(ra.reward.r_high == rb.reward.r_high);
        CHECK(ra.done == rb.done);
        if (ra.done) break;
    }
}
