#pragma once

// Recovery scoring over a recorded trace. Peaks and final errors are exact
// over recorded samples; no inter-sample interpolation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "singletrack/simulate.hpp"

namespace singletrack {

struct RecoveryThresholds {
    double y_tol = 0.2;    // m
    double psi_tol = 0.02; // rad
    double hold = 2.0;     // s, time both errors must stay inside tolerance

    friend bool operator==(const RecoveryThresholds&, const RecoveryThresholds&) = default;

    void validate() const {
        if (!(y_tol > 0.0) || !(psi_tol > 0.0) || !(hold >= 0.0))
            throw std::invalid_argument(
                "thresholds: y_tol > 0, psi_tol > 0, hold >= 0 required");
    }
};

struct RecoveryMetrics {
    std::optional<double> time_to_recovery;  // s
    double peak_lateral_deviation = 0.0;     // m, max |y|
    double peak_yaw_rate = 0.0;              // rad/s, max |wz|
    double peak_sideslip = 0.0;              // rad, max |atan(vy/vx)|
    double final_lateral_error = 0.0;        // m, |y| at horizon
    double final_heading_error = 0.0;        // rad, |psi| at horizon
    bool recovered = false;
};

/// time_to_recovery is the earliest recorded t* such that every sample in
/// [t*, t* + hold] satisfies |y| <= y_tol and |psi| <= psi_tol; recovered is
/// true iff such t* exists with the full hold confirmable inside the trace.
inline RecoveryMetrics compute_metrics(const Trace& trace,
                                       const RecoveryThresholds& thresholds) {
    thresholds.validate();
    if (trace.samples.empty()) throw std::invalid_argument("metrics: empty trace");

    const auto& samples = trace.samples;
    const std::size_t n = samples.size();

    RecoveryMetrics m;
    for (const auto& s : samples) {
        m.peak_lateral_deviation = std::max(m.peak_lateral_deviation, std::abs(s.state.y));
        m.peak_yaw_rate = std::max(m.peak_yaw_rate, std::abs(s.state.wz));
        // |atan(vy/vx)| written sign-free so mirrored traces score identically
        m.peak_sideslip = std::max(m.peak_sideslip, std::atan(std::abs(s.state.vy) / s.state.vx));
    }
    m.final_lateral_error = std::abs(samples.back().state.y);
    m.final_heading_error = std::abs(samples.back().state.psi);

    // Grid timestamps are exact multiples of dt*stride; the epsilon only
    // guards the last-ulp rounding of t + hold.
    constexpr double kEps = 1e-9;
    const double t_last = samples.back().t;

    std::vector<std::size_t> bad_prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const bool inside = std::abs(samples[i].state.y) <= thresholds.y_tol &&
                            std::abs(samples[i].state.psi) <= thresholds.psi_tol;
        bad_prefix[i + 1] = bad_prefix[i] + (inside ? 0u : 1u);
    }

    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_star = samples[i].t;
        if (t_star + thresholds.hold > t_last + kEps) break;  // hold not confirmable
        if (j < i) j = i;
        while (j < n && samples[j].t <= t_star + thresholds.hold + kEps) ++j;
        if (bad_prefix[j] - bad_prefix[i] == 0) {
            m.time_to_recovery = t_star;
            m.recovered = true;
            break;
        }
    }
    return m;
}

}  // namespace singletrack
