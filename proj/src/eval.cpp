#include "navsim/eval.hpp"

#include <algorithm>
#include <cmath>

#include "navsim/errors.hpp"

namespace navsim::eval {

double spl(const std::vector<EpisodeResult>& results) {
    if (results.empty()) throw EmptyResults();
    double sum = 0.0;
    for (const EpisodeResult& r : results) {
        if (r.shortest_len <= 0.0) throw NonpositiveShortestLen();
        if (r.success) sum += r.shortest_len / std::max(r.traveled_len, r.shortest_len);
    }
    return sum / static_cast<double>(results.size());
}

bool success(const std::vector<Vec2>& positions, const std::vector<double>& times,
             const Vec2& goal, double radius, double budget) {
    if (positions.size() != times.size() || positions.empty())
        throw MalformedLog("positions/times size mismatch or empty");
    for (size_t i = 0; i < positions.size(); ++i) {
        if (times[i] > budget) break;
        if (distance(positions[i], goal) < radius) return true;
    }
    return false;
}

double mechanical_cot(const EnergyLog& log, double speed_floor) {
    const size_t n = log.base_speed.size();
    if (log.joint_torques.size() != n || log.joint_speeds.size() != n || log.weight <= 0.0)
        throw MalformedLog("incongruent energy log");
    double sum = 0.0;
    size_t count = 0;
    for (size_t i = 0; i < n; ++i) {
        const double v = log.base_speed[i];
        if (v <= speed_floor) continue;
        double power = 0.0;
        const auto& tau = log.joint_torques[i];
        const auto& qd = log.joint_speeds[i];
        if (tau.size() != qd.size()) throw MalformedLog("torque/speed arity mismatch");
        for (size_t j = 0; j < tau.size(); ++j) power += std::max(tau[j] * qd[j], 0.0);
        sum += power / (log.weight * v);
        ++count;
    }
    if (count == 0) throw NoQualifyingSamples();
    return sum / static_cast<double>(count);
}

TrackingStats tracking_error_stats(const std::vector<Vec2>& commands,
                                   const std::vector<Vec2>& realized, double sample_rate,
                                   double cmd_floor, double lowpass_cutoff_hz) {
    if (commands.size() != realized.size() || commands.empty())
        throw MalformedLog("command/realized size mismatch or empty");

    // single-pole low-pass on the realized velocity
    std::vector<Vec2> filtered(realized.size());
    double alpha = 1.0;
    if (sample_rate > 0.0 && lowpass_cutoff_hz > 0.0) {
        const double rc = 1.0 / (2.0 * M_PI * lowpass_cutoff_hz);
        const double dt = 1.0 / sample_rate;
        alpha = dt / (rc + dt);
    }
    filtered[0] = realized[0];
    for (size_t i = 1; i < realized.size(); ++i)
        filtered[i] = filtered[i - 1] + (realized[i] - filtered[i - 1]) * alpha;

    TrackingStats stats;
    stats.bins.assign(static_cast<size_t>(std::lround(2.0 / stats.bin_width)), 0);
    double sum = 0.0;
    for (size_t i = 0; i < commands.size(); ++i) {
        if (commands[i].norm() <= cmd_floor) continue;
        const double err = (commands[i] - filtered[i]).norm();
        sum += err;
        ++stats.qualifying_samples;
        const auto bin = static_cast<size_t>(clamp(err / stats.bin_width, 0.0,
                                                   static_cast<double>(stats.bins.size() - 1)));
        stats.bins[bin] += 1;
    }
    if (stats.qualifying_samples == 0) throw NoQualifyingSamples();
    stats.mean = sum / stats.qualifying_samples;
    return stats;
}

BucketReport bucket_report(const std::vector<EpisodeResult>& results) {
    BucketReport rep;
    std::vector<EpisodeResult> b1, b2;
    for (const EpisodeResult& r : results) {
        if (r.shortest_len >= 5.0 && r.shortest_len < 10.0) b1.push_back(r);
        else if (r.shortest_len >= 10.0 && r.shortest_len <= 20.0) b2.push_back(r);
    }
    auto rate = [](const std::vector<EpisodeResult>& v) {
        int s = 0;
        for (const auto& r : v) s += r.success ? 1 : 0;
        return v.empty() ? 0.0 : static_cast<double>(s) / static_cast<double>(v.size());
    };
    if (!b1.empty()) {
        rep.spl_5_10 = spl(b1);
        rep.success_5_10 = rate(b1);
        rep.n_5_10 = static_cast<int>(b1.size());
    }
    if (!b2.empty()) {
        rep.spl_10_20 = spl(b2);
        rep.success_10_20 = rate(b2);
        rep.n_10_20 = static_cast<int>(b2.size());
    }
    return rep;
}

}  // namespace navsim::eval
