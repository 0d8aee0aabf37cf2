#pragma once

#include <array>

#include "navsim/geometry.hpp"
#include "navsim/rng.hpp"
#include "navsim/terrain.hpp"

namespace navsim::agent {

struct VelocityCommand {
    double vx = 0.0;  // body-frame forward, m/s
    double vy = 0.0;  // body-frame lateral, m/s
    double wz = 0.0;  // yaw rate, rad/s
};

struct ActionBounds {
    double vx_lo = -1.0, vx_hi = 2.0;
    double vy_lo = -0.75, vy_hi = 0.75;
    double wz_lo = -1.25, wz_hi = 1.25;

    bool contains(const VelocityCommand& c) const {
        return c.vx >= vx_lo && c.vx <= vx_hi && c.vy >= vy_lo && c.vy <= vy_hi &&
               c.wz >= wz_lo && c.wz <= wz_hi;
    }
};

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

struct ActuatorModel {
    double torque_constant = 0.05;  // K_tau, Nm/A
    double gear_ratio = 10.0;       // GR
    double c1 = 0.1;                // Nm*s/rad
    double c2 = 0.2;                // Nm
};

// Thresholds for step/slope traversability; ascending capability is lower
// than descending and both shrink with speed.
struct TraversalLimits {
    double h_up0 = 0.20;      // m, max ascendable step at rest
    double h_down0 = 0.35;    // m, max descendable drop at rest
    double speed_ref = 2.0;   // m/s at which capability is halved
    double slope_max = 0.45;  // rad

    double h_up(double speed) const;
    double h_down(double speed) const;
};

struct ProxyState {
    Vec2 pos;
    double z = 0.0;
    double yaw = 0.0;
    VelocityCommand vel;      // realized body-frame velocity
    double last_tracking_error = 0.0;
    double last_slope = 0.0;
};

struct ProxyConfig {
    double time_constant = 0.3;  // s, first-order velocity tracking lag
    TraversalLimits limits;
    double radius = 0.35;  // m, robot disc for collision checks
};

// First-order velocity tracking with terrain blocking; z snapped to terrain.
ProxyState proxy_step(const ProxyState& state, const VelocityCommand& cmd,
                      const terrain::HeightField& field, double ll_dt,
                      const ProxyConfig& cfg = ProxyConfig{});

// Step/slope feasibility between two nearby points at a given speed.
bool traversal_check(const terrain::HeightField& field, const Vec2& from, const Vec2& to,
                     double speed, const TraversalLimits& limits = TraversalLimits{});

double friction_torque(double joint_vel, const ActuatorModel& model);
double motor_torque(double current, const ActuatorModel& model);

// Wheel current from target wheel speed through a first-order lag; stands in
// for the learned current model.
class CurrentModel {
public:
    explicit CurrentModel(double gain = 2.0, double lag = 0.1) : gain_(gain), lag_(lag) {}
    double step(double target_speed, double dt);

private:
    double gain_, lag_;
    double current_ = 0.0;
};

// Mean/concentration parameterization: alpha = a1*a2, beta = a2 - a1*a2.
BetaParams beta_from_policy_outputs(double a1, double a2);

double beta_log_prob(double x, const BetaParams& params);

double beta_sample(const BetaParams& params, Rng& rng);

// Affine per-axis map of u in [0,1]^3 onto the command box.
VelocityCommand map_to_bounds(const std::array<double, 3>& u, const ActionBounds& bounds);

// Pure-pursuit proxy policy used as the test oracle and the curriculum
// scorer. Deterministic; outputs pre-bounds u in [0,1]^3.
struct ScriptedPolicyInput {
    Vec2 wp1_robot_frame;         // first waypoint in robot frame
    double max_scan_rise = 0.0;   // largest height rise seen ahead, m
};

std::array<double, 3> scripted_policy(const ScriptedPolicyInput& obs,
                                      const ActionBounds& bounds = ActionBounds{});

}  // namespace navsim::agent
