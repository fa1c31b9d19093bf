#pragma once

// Post-impact initial conditions. A collision is emulated by nonzero lateral
// velocity and/or yaw rate at t = 0 instead of modeling contact forces.

#include <stdexcept>
#include <string>

#include "singletrack/dynamics.hpp"
#include "singletrack/vehicle.hpp"

namespace singletrack {

struct ScenarioSpec {
    double vx0 = 30.0;  // m/s
    double vy0 = 0.0;   // m/s
    double wz0 = 0.0;   // rad/s
    double x0 = 0.0;    // m
    double y0 = 0.0;    // m
    double psi0 = 0.0;  // rad
    std::string label = "custom";

    friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;

    VehicleState initial_state() const {
        return VehicleState{vx0, vy0, wz0, x0, y0, psi0};
    }

    void validate() const {
        if (!(vx0 >= kVxFloor))
            throw std::invalid_argument("scenario: vx0 must be >= vx floor " +
                                        std::to_string(kVxFloor));
    }
};

/// Lateral collision at the C.G.: pure lateral velocity kick.
inline ScenarioSpec case1() {
    ScenarioSpec s;
    s.vx0 = 30.0;
    s.vy0 = 20.0;
    s.wz0 = 0.0;
    s.label = "case1";
    return s;
}

/// Lateral collision off the C.G.: lateral velocity plus yaw-rate kick.
inline ScenarioSpec case2() {
    ScenarioSpec s;
    s.vx0 = 30.0;
    s.vy0 = 10.0;
    s.wz0 = 0.35;
    s.label = "case2";
    return s;
}

}  // namespace singletrack
