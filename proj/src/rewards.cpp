#include "navsim/rewards.hpp"

#include <cmath>

namespace navsim::rewards {

HlTerms hl_reward_terms(const Vec2& robot_pos, const Vec2& velocity_world, const Vec2& wp1,
                        const std::vector<BufferEntry>& buffer, const RewardConstants& k) {
    HlTerms t;
    const Vec2 e = wp1 - robot_pos;
    const double dist_to_goal = e.norm();
    const bool near_goal = dist_to_goal < k.goal_radius;

    t.goal = near_goal ? 1.0 : 0.0;

    if (near_goal) {
        t.dense = 1.0;
    } else {
        const double v_along = velocity_world.dot(e.normalized());
        t.dense = clamp(v_along, 0.0, k.v_thres) / k.v_thres;
    }

    // revisit cost: zero near the goal, else -n per buffered position within radius
    t.exploration = 0.0;
    if (!near_goal) {
        for (const BufferEntry& b : buffer)
            if (distance(robot_pos, b.pos) < k.buffer_radius)
                t.exploration -= static_cast<double>(b.visit_steps);
    }

    t.stability =
        near_goal ? std::exp(-k.vel_exp_coeff * velocity_world.norm_sq()) : 0.0;
    return t;
}

LlTerms ll_reward_terms(const BodyState& body, const Vec2& v_des, double w_des,
                        const RewardConstants& k) {
    LlTerms t;
    const Vec2& v = body.velocity_body;
    if (v_des.norm() < 0.05) {
        t.lin_vel = 2.0 * std::exp(-k.vel_exp_coeff * v.norm_sq());
    } else {
        t.lin_vel = std::exp(-k.vel_exp_coeff * (v - v_des).norm_sq()) + v_des.dot(v);
    }
    const double werr = body.wz - w_des;
    t.ang_vel = std::exp(-k.vel_exp_coeff * werr * werr);
    t.body_motion = -k.body_vz_coeff * body.vz * body.vz - k.body_wxy_coeff * std::abs(body.wx) -
                    k.body_wxy_coeff * std::abs(body.wy);
    const double tilt = std::acos(clamp(body.rot_zz, -1.0, 1.0));
    t.orientation = tilt * tilt;
    t.base_height = std::max(0.0, std::abs(body.base_height - k.height_target) - k.height_tolerance);
    return t;
}

RegTerms regularization_terms(const JointState& j, bool terminated, const RewardWeights& w) {
    RegTerms t;
    for (int i = 0; i < 12; ++i) {
        t.torque -= j.tau[i] * j.tau[i];
        t.joint_motion -= w.c_k * (j.qd[i] * j.qd[i] +
                                   kConstants.accel_coeff * j.qdd[i] * j.qdd[i]);
        const double d1 = j.q_des_history[0][i] - j.q_des_history[1][i];
        const double d2 =
            j.q_des_history[0][i] - 2.0 * j.q_des_history[1][i] + j.q_des_history[2][i];
        t.action_smooth -= w.c_k * (d1 * d1 + d2 * d2);
        if (j.is_knee[i]) {
            const double over = std::abs(j.q[i]) - w.knee_limit;
            if (over > 0.0) t.joint_limit -= over * over;
        }
    }
    t.body_contact = -static_cast<double>(j.body_contacts);
    t.survival = terminated ? 0.0 : 1.0;
    return t;
}

double gait_tracking_reward(const std::array<bool, 4>& fc, const std::array<bool, 4>& fc_target,
                            const RewardConstants& k) {
    int matches = 0;
    for (int i = 0; i < 4; ++i)
        if (fc[i] == fc_target[i]) ++matches;
    return k.gait_match_coeff * matches;
}

double compose_reward(RewardBreakdown& b, const RewardWeights& w, Level level) {
    const double low = w.lin_vel * b.ll.lin_vel + w.ang_vel * b.ll.ang_vel +
                       w.body_motion * b.ll.body_motion + w.orientation * b.ll.orientation +
                       w.base_height * b.ll.base_height + w.torque * b.reg.torque +
                       w.joint_motion * b.reg.joint_motion + w.action_smooth * b.reg.action_smooth +
                       w.joint_limit * b.reg.joint_limit + w.body_contact * b.reg.body_contact +
                       w.survival * b.reg.survival;
    b.r_low = low;
    if (level == Level::Low) return low;

    const double high = w.goal * b.hl.goal + w.dense * b.hl.dense +
                        w.exploration * b.hl.exploration + w.stability * b.hl.stability +
                        w.w_l * low;
    b.r_high = high;
    return high;
}

}  // namespace navsim::rewards
