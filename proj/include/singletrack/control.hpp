#pragma once

// Open-loop recovery control laws: two windowed half-sine steering pulses
// (recovery pulse, then alignment pulse) and a windowed half-sine tractive
// force pulse on top of the pre-collision cruise force.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "singletrack/dynamics.hpp"
#include "singletrack/vehicle.hpp"

namespace singletrack {

/// Parameters of the two-pulse steering law. The second amplitude may carry
/// either sign; the overall direction gain k_dir multiplies both pulses.
struct SteeringParams {
    double a1 = 0.0;     // rad, recovery-pulse amplitude, >= 0
    double a2 = 0.0;     // rad, alignment-pulse amplitude, signed
    double k_dir = 1.0;  // signed direction gain
    double tau0 = 1.0;   // s, recovery window start
    double tau1 = 3.0;   // s, recovery window end
    double tau2 = 10.0;  // s, alignment window start
    double tau3 = 11.0;  // s, alignment window end

    friend bool operator==(const SteeringParams&, const SteeringParams&) = default;

    void validate() const {
        if (!(tau0 < tau1 && tau1 <= tau2 && tau2 < tau3))
            throw std::invalid_argument(
                "steering: window ordering tau0 < tau1 <= tau2 < tau3 violated");
        if (!(a1 >= 0.0))
            throw std::invalid_argument("steering: a1 must be >= 0 (sign lives in k_dir)");
        if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(k_dir))
            throw std::invalid_argument("steering: amplitudes must be finite");
        // Windows are disjoint, so the sup of |steering| is the larger pulse.
        if (!(std::abs(k_dir) * std::max(std::abs(a1), std::abs(a2)) <
              std::numbers::pi / 2))
            throw std::invalid_argument(
                "steering: amplitude bound |k_dir|*max(a1,|a2|) < pi/2 violated");
    }
};

/// Parameters of the tractive-force law.
struct ForceParams {
    double f_initial = 0.0;  // N, pre-collision cruise force
    double a_c = 0.0;        // N, control-pulse amplitude, signed
    double tau_c1 = 5.0;     // s, force window start
    double tau_c2 = 10.0;    // s, force window end

    friend bool operator==(const ForceParams&, const ForceParams&) = default;

    void validate() const {
        if (!(tau_c1 < tau_c2))
            throw std::invalid_argument("force: window ordering tau_c1 < tau_c2 violated");
        if (!std::isfinite(f_initial) || !std::isfinite(a_c))
            throw std::invalid_argument("force: amplitudes must be finite");
    }
};

/// Unit-step window: 1 on [a, b), 0 elsewhere.
inline double window(double t, double a, double b) {
    return (a <= t && t < b) ? 1.0 : 0.0;
}

/// Total steering command at time t. Zero outside both windows, continuous
/// everywhere (the half-sine vanishes at both window edges).
inline double steering(double t, const SteeringParams& p) {
    double out = 0.0;
    if (window(t, p.tau0, p.tau1) != 0.0)
        out += p.a1 * std::sin(std::numbers::pi * (t - p.tau0) / (p.tau1 - p.tau0));
    if (window(t, p.tau2, p.tau3) != 0.0)
        out += p.a2 * std::sin(std::numbers::pi * (t - p.tau2) / (p.tau3 - p.tau2));
    return p.k_dir * out;
}

/// Tractive-force command at time t: cruise force plus the windowed pulse.
inline double tractive_force(double t, const ForceParams& p) {
    double out = p.f_initial;
    if (window(t, p.tau_c1, p.tau_c2) != 0.0)
        out += p.a_c * std::sin(std::numbers::pi * (t - p.tau_c1) / (p.tau_c2 - p.tau_c1));
    return out;
}

/// Straight-line steady-state force at speed vx0: the force balancing drag at
/// zero steer and zero lateral motion. Both models double the commanded force
/// at zero steer, so they share the same balance K_d vx0^2 / 2.
inline double cruise_force(double vx0, const VehicleParams& params, Model /*model*/) {
    if (!(vx0 >= kVxFloor)) throw VxFloorError(vx0);
    return params.drag_lumped * vx0 * vx0 / 2.0;
}

/// The complete control parameterization consumed by the simulator.
struct ControlLaws {
    SteeringParams steering;
    ForceParams force;

    friend bool operator==(const ControlLaws&, const ControlLaws&) = default;

    ControlInput at(double t) const {
        return ControlInput{singletrack::steering(t, steering),
                            singletrack::tractive_force(t, force)};
    }
};

}  // namespace singletrack
