#include "navsim/agent.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"

namespace navsim::agent {

double TraversalLimits::h_up(double speed) const {
    const double s = clamp(std::abs(speed), 0.0, speed_ref);
    return h_up0 * (1.0 - 0.5 * s / speed_ref);
}

double TraversalLimits::h_down(double speed) const {
    const double s = clamp(std::abs(speed), 0.0, speed_ref);
    return h_down0 * (1.0 - 0.5 * s / speed_ref);
}

bool traversal_check(const terrain::HeightField& field, const Vec2& from, const Vec2& to,
                     double speed, const TraversalLimits& limits) {
    if (!field.contains(from) || !field.contains(to)) throw OutOfField();
    const double dh = field.sample(to) - field.sample(from);
    if (dh > limits.h_up(speed)) return false;
    if (-dh > limits.h_down(speed)) return false;

    // Slope is judged on the smooth component of the terrain ahead: rises big
    // enough to be discrete steps are excluded (those are the step rule's
    // job), so a staircase does not read as a near-vertical ramp.
    constexpr double kSlopeBaseline = 0.5;   // m
    constexpr double kStepJump = 0.08;       // m, larger rises count as steps
    constexpr int kSlopeSamples = 10;
    const double d = distance(from, to);
    if (d > 1e-9) {
        const Vec2 dir = (to - from).normalized();
        double smooth_rise = 0.0;
        double prev = field.sample(from);
        for (int i = 1; i <= kSlopeSamples; ++i) {
            const Vec2 p = from + dir * (kSlopeBaseline * i / kSlopeSamples);
            if (!field.contains(p)) break;
            const double h = field.sample(p);
            const double jump = h - prev;
            if (std::abs(jump) <= kStepJump) smooth_rise += jump;
            prev = h;
        }
        if (std::atan2(std::abs(smooth_rise), kSlopeBaseline) > limits.slope_max) return false;
    }
    return true;
}

ProxyState proxy_step(const ProxyState& state, const VelocityCommand& cmd,
                      const terrain::HeightField& field, double ll_dt, const ProxyConfig& cfg) {
    ProxyState next = state;
    const double k = ll_dt / cfg.time_constant;
    next.vel.vx += (cmd.vx - next.vel.vx) * k;
    next.vel.vy += (cmd.vy - next.vel.vy) * k;
    next.vel.wz += (cmd.wz - next.vel.wz) * k;

    next.yaw = wrap_angle(next.yaw + next.vel.wz * ll_dt);

    const Vec2 v_world = Vec2{next.vel.vx, next.vel.vy}.rotated(next.yaw);
    const Vec2 target = next.pos + v_world * ll_dt;
    const double speed = v_world.norm();

    bool moved = false;
    if (field.contains(target) && traversal_check(field, next.pos, target, speed, cfg.limits)) {
        const double dh = field.sample(target) - field.sample(next.pos);
        const double d = distance(next.pos, target);
        next.last_slope = d > 1e-9 ? std::atan2(dh, d) : 0.0;
        next.pos = target;
        moved = true;
    }
    if (!moved) {
        // blocked: kill horizontal motion, keep yaw rate
        next.vel.vx = 0.0;
        next.vel.vy = 0.0;
    }
    next.z = field.sample(next.pos);
    next.last_tracking_error =
        Vec2{cmd.vx - next.vel.vx, cmd.vy - next.vel.vy}.norm();
    return next;
}

double friction_torque(double joint_vel, const ActuatorModel& model) {
    const double sgn = joint_vel > 0.0 ? 1.0 : (joint_vel < 0.0 ? -1.0 : 0.0);
    return -model.c1 * joint_vel - model.c2 * sgn;
}

double motor_torque(double current, const ActuatorModel& model) {
    return model.torque_constant * model.gear_ratio * current;
}

double CurrentModel::step(double target_speed, double dt) {
    current_ += (gain_ * target_speed - current_) * dt / lag_;
    return current_;
}

BetaParams beta_from_policy_outputs(double a1, double a2) {
    if (!(a1 > 0.0 && a1 < 1.0)) throw DomainError("a1 must be in (0,1)");
    if (!(a2 > 0.0) || !std::isfinite(a2)) throw DomainError("a2 must be positive");
    BetaParams p;
    p.alpha = a1 * a2;
    p.beta = a2 - a1 * a2;
    return p;
}

double beta_log_prob(double x, const BetaParams& params) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must be in (0,1)");
    if (!(params.alpha > 0.0 && params.beta > 0.0))
        throw DomainError("beta parameters must be positive");
    const double xc = clamp(x, 1e-6, 1.0 - 1e-6);
    const double log_b =
        std::lgamma(params.alpha) + std::lgamma(params.beta) - std::lgamma(params.alpha + params.beta);
    return (params.alpha - 1.0) * std::log(xc) + (params.beta - 1.0) * std::log1p(-xc) - log_b;
}

namespace {

// Marsaglia-Tsang; the alpha < 1 boost keeps it exact for all shapes.
double gamma_sample(double alpha, Rng& rng) {
    if (alpha < 1.0) {
        const double u = std::max(rng.uniform(), 1e-300);
        return gamma_sample(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double beta_sample(const BetaParams& params, Rng& rng) {
    const double ga = gamma_sample(params.alpha, rng);
    const double gb = gamma_sample(params.beta, rng);
    const double x = ga / (ga + gb);
    return clamp(x, 1e-12, 1.0 - 1e-12);
}

VelocityCommand map_to_bounds(const std::array<double, 3>& u, const ActionBounds& b) {
    VelocityCommand c;
    c.vx = b.vx_lo + clamp(u[0], 0.0, 1.0) * (b.vx_hi - b.vx_lo);
    c.vy = b.vy_lo + clamp(u[1], 0.0, 1.0) * (b.vy_hi - b.vy_lo);
    c.wz = b.wz_lo + clamp(u[2], 0.0, 1.0) * (b.wz_hi - b.wz_lo);
    return c;
}

std::array<double, 3> scripted_policy(const ScriptedPolicyInput& obs, const ActionBounds& b) {
    const double dist = obs.wp1_robot_frame.norm();
    const double heading = std::atan2(obs.wp1_robot_frame.y, obs.wp1_robot_frame.x);

    double wz_des = clamp(2.0 * heading, b.wz_lo, b.wz_hi);

    // forward speed: shrink with heading error, detected rises ahead, and
    // proximity to the waypoint
    double vx_des = b.vx_hi * std::max(0.0, std::cos(heading));
    vx_des *= clamp(1.0 - obs.max_scan_rise / 0.3, 0.25, 1.0);
    vx_des *= clamp(dist / 1.0, 0.0, 1.0);
    vx_des = clamp(vx_des, 0.0, b.vx_hi);

    std::array<double, 3> u{};
    u[0] = (vx_des - b.vx_lo) / (b.vx_hi - b.vx_lo);
    u[1] = (0.0 - b.vy_lo) / (b.vy_hi - b.vy_lo);
    u[2] = (wz_des - b.wz_lo) / (b.wz_hi - b.wz_lo);
    return u;
}

}  // namespace navsim::agent
