#pragma once

#include <vector>

#include "navsim/geometry.hpp"

namespace navsim::eval {

struct EpisodeResult {
    bool success = false;
    double shortest_len = 0.0;  // l_i, graph geodesic, m
    double traveled_len = 0.0;  // p_i, m
    double duration = 0.0;      // s
};

struct EnergyLog {
    std::vector<std::vector<double>> joint_torques;  // [sample][joint], Nm
    std::vector<std::vector<double>> joint_speeds;   // [sample][joint], rad/s
    std::vector<double> base_speed;                  // |v_xy^b| per sample, m/s
    double weight = 0.0;                             // mg, N
    double sample_rate = 0.0;                        // Hz
};

struct TrackingStats {
    double mean = 0.0;
    std::vector<int> bins;  // 0.05 m/s bins over [0, 2] m/s
    double bin_width = 0.05;
    int qualifying_samples = 0;
};

// (1/N) sum S_i * l_i / max(p_i, l_i)
double spl(const std::vector<EpisodeResult>& results);

// True iff the trajectory comes within `radius` of the goal at some t <= budget.
bool success(const std::vector<Vec2>& positions, const std::vector<double>& times,
             const Vec2& goal, double radius = 0.5, double budget = 60.0);

// Mean over qualifying samples of sum_j max(tau*qd, 0) / (mg * |v_xy|).
double mechanical_cot(const EnergyLog& log, double speed_floor = 0.2);

// Per-sample ||v_cmd - v_real|| over samples with command speed > cmd_floor.
// A single-pole 5 Hz low-pass is applied to the realized velocities first.
TrackingStats tracking_error_stats(const std::vector<Vec2>& commands,
                                   const std::vector<Vec2>& realized, double sample_rate,
                                   double cmd_floor = 0.5, double lowpass_cutoff_hz = 5.0);

// Table-S style aggregation keyed by shortest-path-length bucket.
struct BucketReport {
    double spl_5_10 = 0.0;
    double success_5_10 = 0.0;
    int n_5_10 = 0;
    double spl_10_20 = 0.0;
    double success_10_20 = 0.0;
    int n_10_20 = 0;
};

BucketReport bucket_report(const std::vector<EpisodeResult>& results);

}  // namespace navsim::eval
