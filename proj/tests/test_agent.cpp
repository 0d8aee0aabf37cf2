#include <doctest.h>

#include <cmath>

#include "navsim/agent.hpp"
#include "navsim/errors.hpp"

using namespace navsim;
using namespace navsim::agent;

namespace {

// Quadrature oracle for the beta density. The substitution x = sin^2(theta)
// removes the endpoint singularities for alpha, beta >= 0.5, leaving a smooth
// integrand for Simpson's rule.
double beta_density_integral(const BetaParams& p, int n = 20000) {
    const double half_pi = std::acos(0.0);
    auto g = [&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        return 2.0 * std::pow(s, 2.0 * p.alpha - 1.0) * std::pow(c, 2.0 * p.beta - 1.0) *
               std::exp(std::lgamma(p.alpha + p.beta) - std::lgamma(p.alpha) -
                        std::lgamma(p.beta));
    };
    const double h = half_pi / n;
    double sum = g(1e-12) + g(half_pi - 1e-12);
    for (int i = 1; i < n; ++i) sum += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

terrain::HeightField flat_field(double h = 0.0) {
    terrain::HeightField f;
    f.resolution = 0.1;
    f.origin = {0.05, 0.05};
    f.width = 200;
    f.height = 200;
    f.data.assign(40000, static_cast<float>(h));
    f.friction.assign(40000, 0.8f);
    return f;
}

}  // namespace

TEST_CASE("mean-concentration parameterization is exact") {
    const auto p = beta_from_policy_outputs(0.3, 5.0);
    CHECK(p.alpha == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p.beta == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(p.alpha / (p.alpha + p.beta) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(p.alpha + p.beta == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(beta_from_policy_outputs(0.0, 5.0), DomainError);
    CHECK_THROWS_AS(beta_from_policy_outputs(1.0, 5.0), DomainError);
    CHECK_THROWS_AS(beta_from_policy_outputs(0.5, 0.0), DomainError);
}

TEST_CASE("beta log-prob matches the lgamma closed form") {
    const BetaParams p{2.0, 5.0};
    const double x = 0.37;
    const double expect = std::lgamma(7.0) - std::lgamma(2.0) - std::lgamma(5.0) +
                          1.0 * std::log(x) + 4.0 * std::log(1.0 - x);
    CHECK(beta_log_prob(x, p) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(beta_log_prob(0.0, p), DomainError);
    CHECK_THROWS_AS(beta_log_prob(1.0, p), DomainError);
    CHECK_THROWS_AS(beta_log_prob(0.5, BetaParams{0.0, 1.0}), DomainError);
}

TEST_CASE("beta density integrates to one (sampled parameter grid)") {
    for (const BetaParams p : {BetaParams{1.0, 1.0}, BetaParams{2.0, 5.0}, BetaParams{0.5, 2.0}})
        CHECK(beta_density_integral(p) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("beta samples live in (0,1), are deterministic, and match the mean") {
    const BetaParams p{2.0, 3.0};
    Rng a(42), b(42);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = beta_sample(p, a);
        CHECK(x > 0.0);
        CHECK(x < 1.0);
        CHECK(x == beta_sample(p, b));
        sum += x;
    }
    const double mean = p.alpha / (p.alpha + p.beta);  // 0.4
    const double var = p.alpha * p.beta /
                       ((p.alpha + p.beta) * (p.alpha + p.beta) * (p.alpha + p.beta + 1.0));
    CHECK(std::abs(sum / n - mean) < 3.0 * std::sqrt(var / n));
}

TEST_CASE("bounds mapping is affine per axis") {
    const ActionBounds b;
    const auto lo = map_to_bounds({0.0, 0.0, 0.0}, b);
    CHECK(lo.vx == doctest::Approx(-1.0));
    CHECK(lo.vy == doctest::Approx(-0.75));
    CHECK(lo.wz == doctest::Approx(-1.25));
    const auto hi = map_to_bounds({1.0, 1.0, 1.0}, b);
    CHECK(hi.vx == doctest::Approx(2.0));
    CHECK(hi.vy == doctest::Approx(0.75));
    CHECK(hi.wz == doctest::Approx(1.25));
    const auto mid = map_to_bounds({0.5, 0.5, 0.5}, b);
    CHECK(mid.vx == doctest::Approx(0.5));
    CHECK(mid.vy == doctest::Approx(0.0));
    CHECK(mid.wz == doctest::Approx(0.0));
    CHECK(b.contains(mid));
}

TEST_CASE("traversal capability shrinks linearly with speed") {
    const TraversalLimits lim;
    CHECK(lim.h_up(0.0) == doctest::Approx(0.20));
    CHECK(lim.h_up(2.0) == doctest::Approx(0.10));
    CHECK(lim.h_up(1.0) == doctest::Approx(0.15));
    CHECK(lim.h_down(0.0) == doctest::Approx(0.35));
    CHECK(lim.h_down(2.0) == doctest::Approx(0.175));
}

TEST_CASE("traversal check: steps, drops, slopes") {
    auto f = flat_field();
    // a 0.15 m ledge at x >= 10
    for (int iy = 0; iy < f.height; ++iy)
        for (int ix = 100; ix < f.width; ++ix) f.at(ix, iy) = 0.15f;

    const Vec2 before{9.9, 5.0}, after{10.1, 5.0};
    CHECK(traversal_check(f, before, after, 0.2));        // slow: 0.15 < h_up(0.2)
    CHECK_FALSE(traversal_check(f, before, after, 2.0));  // fast: 0.15 > 0.10
    CHECK(traversal_check(f, after, before, 2.0));        // dropping is easier
    CHECK_THROWS_AS(traversal_check(f, {-5.0, 0.0}, {0.0, 0.0}, 0.1), OutOfField);

    // a long 30-degree ramp passes; a 35-degree ramp fails the 0.45 rad limit
    auto ramp = flat_field();
    for (int iy = 0; iy < ramp.height; ++iy)
        for (int ix = 0; ix < ramp.width; ++ix)
            ramp.at(ix, iy) = static_cast<float>(std::tan(0.40) * (ix * 0.1));
    CHECK(traversal_check(ramp, {5.0, 5.0}, {5.05, 5.0}, 0.1));
    for (int iy = 0; iy < ramp.height; ++iy)
        for (int ix = 0; ix < ramp.width; ++ix)
            ramp.at(ix, iy) = static_cast<float>(std::tan(0.50) * (ix * 0.1));
    CHECK_FALSE(traversal_check(ramp, {5.0, 5.0}, {5.05, 5.0}, 0.1));
}

TEST_CASE("proxy velocity tracking follows the first-order closed form") {
    const auto f = flat_field();
    ProxyState s;
    s.pos = {5.0, 5.0};
    const VelocityCommand cmd{1.0, 0.0, 0.0};
    const ProxyConfig cfg;
    const double k = 0.02 / cfg.time_constant;
    for (int n = 1; n <= 50; ++n) {
        s = proxy_step(s, cmd, f, 0.02, cfg);
        CHECK(s.vel.vx == doctest::Approx(1.0 - std::pow(1.0 - k, n)).epsilon(1e-12));
    }
    CHECK(s.pos.x > 5.0);
    CHECK(s.pos.y == doctest::Approx(5.0));
    CHECK(s.z == doctest::Approx(0.0));
}

TEST_CASE("proxy blocked by a wall: planar velocity zeroed, yaw still turns") {
    auto f = flat_field();
    for (int iy = 0; iy < f.height; ++iy)
        for (int ix = 100; ix < f.width; ++ix) f.at(ix, iy) = 1.5f;
    ProxyState s;
    s.pos = {9.98, 5.0};  // the next 40 ms step would land on the wall
    s.vel = {2.0, 0.0, 0.0};
    const VelocityCommand cmd{2.0, 0.0, 0.5};
    s = proxy_step(s, cmd, f, 0.02);
    CHECK(s.vel.vx == 0.0);
    CHECK(s.vel.vy == 0.0);
    CHECK(s.pos.x == doctest::Approx(9.98));
    CHECK(s.yaw > 0.0);
}

TEST_CASE("actuator torque models") {
    const ActuatorModel m;
    CHECK(motor_torque(3.0, m) == doctest::Approx(0.05 * 10.0 * 3.0).epsilon(1e-12));
    CHECK(friction_torque(2.0, m) == doctest::Approx(-0.1 * 2.0 - 0.2).epsilon(1e-12));
    CHECK(friction_torque(-2.0, m) == doctest::Approx(0.2 + 0.2).epsilon(1e-12));
    CHECK(friction_torque(0.0, m) == 0.0);  // sgn(0) = 0, no Coulomb term at rest

    CurrentModel cm(2.0, 0.1);
    double i1 = cm.step(1.0, 0.02);  // first-order rise toward gain * target
    CHECK(i1 == doctest::Approx(2.0 * 0.2).epsilon(1e-12));
    CHECK(cm.step(1.0, 0.02) > i1);
}

TEST_CASE("scripted policy steers at the waypoint and slows for steps") {
    const ActionBounds b;
    // waypoint dead ahead and far: full throttle, no turn
    auto cmd = map_to_bounds(scripted_policy({{5.0, 0.0}, 0.0}, b), b);
    CHECK(cmd.vx == doctest::Approx(2.0));
    CHECK(cmd.wz == doctest::Approx(0.0));
    // waypoint to the left: positive yaw rate
    cmd = map_to_bounds(scripted_policy({{1.0, 2.0}, 0.0}, b), b);
    CHECK(cmd.wz > 0.0);
    // waypoint to the right: negative
    cmd = map_to_bounds(scripted_policy({{1.0, -2.0}, 0.0}, b), b);
    CHECK(cmd.wz < 0.0);
    // a tall rise ahead slows the approach
    const auto fast = map_to_bounds(scripted_policy({{5.0, 0.0}, 0.0}, b), b);
    const auto slow = map_to_bounds(scripted_policy({{5.0, 0.0}, 0.2}, b), b);
    CHECK(slow.vx < fast.vx);
    CHECK(slow.vx > 0.0);
}
