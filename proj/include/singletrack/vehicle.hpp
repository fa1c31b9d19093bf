#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace singletrack {

/// Physical constants of the plant. Units: SI throughout.
struct VehicleParams {
    double mass = 1750.0;             // kg
    double yaw_inertia = 2350.0;      // kg m^2
    double dist_front = 1.2;          // m, C.G. to front axle
    double dist_rear = 1.6;           // m, C.G. to rear axle
    double cornering_front = 12e4;    // N/rad
    double cornering_rear = 12e4;     // N/rad
    double mu0 = 0.015;               // rolling-friction constant
    double mu1 = 7e-6;                // s^2/m^2, speed-dependent friction
    double gravity = 9.8;             // m/s^2
    double drag_lumped = 0.98;        // N s^2/m^2, lumped 1/2*rho*Cd*A

    friend bool operator==(const VehicleParams&, const VehicleParams&) = default;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("vehicle: ") + name + " must be > 0");
        };
        auto nonneg = [](double v, const char* name) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("vehicle: ") + name + " must be >= 0");
        };
        positive(mass, "mass");
        positive(yaw_inertia, "yaw_inertia");
        positive(dist_front, "dist_front");
        positive(dist_rear, "dist_rear");
        positive(cornering_front, "cornering_front");
        positive(cornering_rear, "cornering_rear");
        positive(gravity, "gravity");
        nonneg(mu0, "mu0");
        nonneg(mu1, "mu1");
        nonneg(drag_lumped, "drag_lumped");
    }
};

/// Body-frame velocities plus global pose; the ODE state vector.
struct VehicleState {
    double vx = 0.0;   // m/s, longitudinal body velocity
    double vy = 0.0;   // m/s, lateral body velocity
    double wz = 0.0;   // rad/s, yaw rate
    double x = 0.0;    // m, global X
    double y = 0.0;    // m, global Y
    double psi = 0.0;  // rad, orientation

    friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

/// Commanded inputs at one instant.
struct ControlInput {
    double steer = 0.0;           // rad
    double tractive_force = 0.0;  // N

    friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct StateDerivative {
    double vx_dot = 0.0;
    double vy_dot = 0.0;
    double wz_dot = 0.0;
    double x_dot = 0.0;
    double y_dot = 0.0;
    double psi_dot = 0.0;
};

}  // namespace singletrack
