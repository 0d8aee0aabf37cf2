#pragma once

#include <array>
#include <vector>

#include "navsim/geometry.hpp"

namespace navsim::rewards {

struct HlTerms {
    double goal = 0.0;
    double dense = 0.0;
    double exploration = 0.0;
    double stability = 0.0;
};

struct LlTerms {
    double lin_vel = 0.0;
    double ang_vel = 0.0;
    double body_motion = 0.0;
    double orientation = 0.0;   // magnitude, weighted negatively in composition
    double base_height = 0.0;   // magnitude, weighted negatively in composition
};

struct RegTerms {
    double torque = 0.0;
    double joint_motion = 0.0;
    double action_smooth = 0.0;
    double joint_limit = 0.0;
    double body_contact = 0.0;
    double survival = 0.0;
};

struct RewardBreakdown {
    HlTerms hl;
    LlTerms ll;
    RegTerms reg;
    double r_low = 0.0;   // composed: r_l + r_r
    double r_high = 0.0;  // composed: r_h + w_l * (r_l + r_r)
};

struct RewardWeights {
    // high-level
    double goal = 1.0;
    double dense = 1.0;
    double exploration = 0.01;
    double stability = 1.0;
    // low-level
    double lin_vel = 1.0;
    double ang_vel = 0.5;
    double body_motion = 1.0;
    double orientation = -1.0;
    double base_height = -1.0;
    // regularization
    double torque = 1e-4;
    double joint_motion = 1.0;
    double action_smooth = 1.0;
    double joint_limit = 1.0;
    double body_contact = 0.1;
    double survival = 0.02;

    double w_l = 0.3;       // low-level composition scale inside r_high
    double c_k = 0.001;     // joint motion / smoothness scale
    double knee_limit = 2.2;  // rad, soft knee threshold (symmetric)
};

// Constants fixed by the task definition.
struct RewardConstants {
    double goal_radius = 0.75;       // m
    double v_thres = 0.5;            // m/s, dense-reward clip
    double buffer_radius = 1.0;      // m, revisit penalty radius
    int buffer_capacity = 20;        // entries
    double buffer_spacing = 0.5;     // m
    double height_target = 0.55;     // m
    double height_tolerance = 0.05;  // m
    double vel_exp_coeff = 2.0;      // exp(-2 ||.||^2) coefficient
    double body_vz_coeff = 1.25;
    double body_wxy_coeff = 0.4;
    double accel_coeff = 0.01;       // joint acceleration scale inside joint_motion
    double gait_match_coeff = 0.1;
};

inline constexpr RewardConstants kConstants{};

struct BodyState {
    Vec2 velocity_world;      // v, world frame horizontal
    Vec2 velocity_body;       // v^B, body frame horizontal
    double vz = 0.0;          // body-frame vertical velocity
    double wx = 0.0, wy = 0.0, wz = 0.0;
    double rot_zz = 1.0;      // R_b(3,3)
    double base_height = 0.55;
};

struct JointState {
    std::array<double, 12> q{};
    std::array<double, 12> qd{};
    std::array<double, 12> qdd{};
    std::array<double, 12> tau{};
    std::array<std::array<double, 12>, 3> q_des_history{};  // [0]=t, [1]=t-1, [2]=t-2
    int body_contacts = 0;   // |I_c,body \ I_c,wheel|
    std::array<bool, 12> is_knee{};
};

struct BufferEntry {
    Vec2 pos;
    int visit_steps = 1;
};

HlTerms hl_reward_terms(const Vec2& robot_pos, const Vec2& velocity_world, const Vec2& wp1,
                        const std::vector<BufferEntry>& buffer,
                        const RewardConstants& k = kConstants);

LlTerms ll_reward_terms(const BodyState& body, const Vec2& v_des, double w_des,
                        const RewardConstants& k = kConstants);

RegTerms regularization_terms(const JointState& joints, bool terminated,
                              const RewardWeights& w = RewardWeights{});

double gait_tracking_reward(const std::array<bool, 4>& fc, const std::array<bool, 4>& fc_target,
                            const RewardConstants& k = kConstants);

enum class Level { Low, High };

double compose_reward(RewardBreakdown& breakdown, const RewardWeights& w, Level level);

}  // namespace navsim::rewards
