#pragma once

// Right-hand sides of the two single-track models. The generalized model keeps
// the steering-coupled friction and drag terms; the reference model is the
// classical linear-tire formulation. Both divide by vx, so evaluation below
// the vx floor is rejected as out of the models' validity envelope.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "singletrack/vehicle.hpp"

namespace singletrack {

inline constexpr double kVxFloor = 0.5;  // m/s

enum class Model { generalized, reference };

inline const char* to_string(Model m) {
    return m == Model::generalized ? "generalized" : "reference";
}

inline Model model_from_string(const std::string& s) {
    if (s == "generalized") return Model::generalized;
    if (s == "reference") return Model::reference;
    throw std::invalid_argument("unknown model '" + s + "' (generalized|reference)");
}

/// Thrown when a right-hand-side evaluation is requested below the vx floor.
/// This diagnoses loss of model validity, not a numerical bug.
class VxFloorError : public std::runtime_error {
public:
    explicit VxFloorError(double vx,
                          double time = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(format(vx, time)), vx_(vx), time_(time) {}

    double vx() const noexcept { return vx_; }
    double time() const noexcept { return time_; }
    bool has_time() const noexcept { return !std::isnan(time_); }

private:
    static std::string format(double vx, double time) {
        std::string msg = "vx = " + std::to_string(vx) + " m/s below floor " +
                          std::to_string(kVxFloor) + " m/s; single-track model invalid";
        if (!std::isnan(time)) msg += " at t = " + std::to_string(time) + " s";
        return msg;
    }
    double vx_;
    double time_;
};

namespace detail {

inline void check_rhs_preconditions(const VehicleState& s, const ControlInput& u) {
    if (!(s.vx >= kVxFloor)) throw VxFloorError(s.vx);
    if (!(std::abs(u.steer) < 1.5707963267948966))
        throw std::domain_error("steer angle magnitude must stay below pi/2");
}

inline void pose_kinematics(const VehicleState& s, StateDerivative& d) {
    d.x_dot = s.vx * std::cos(s.psi) - s.vy * std::sin(s.psi);
    d.y_dot = s.vx * std::sin(s.psi) + s.vy * std::cos(s.psi);
    d.psi_dot = s.wz;
}

}  // namespace detail

/// Generalized Ackermann single-track model with steering-coupled rolling
/// friction and lumped aerodynamic drag.
inline StateDerivative rhs_generalized(const VehicleState& s, const ControlInput& u,
                                       const VehicleParams& p) {
    detail::check_rhs_preconditions(s, u);

    const double sin_d = std::sin(u.steer);
    const double cos_d = std::cos(u.steer);
    const double vy_vx = s.vy / s.vx;
    const double wz_vx = s.wz / s.vx;
    const double front = 2.0 * p.cornering_front;
    const double rear = 2.0 * p.cornering_rear;
    const double rolling = (p.mu0 + p.mu1 * s.vx * s.vx) * p.gravity;

    StateDerivative d;
    d.vx_dot = u.tractive_force / p.mass * (cos_d + 1.0)
             - front / p.mass * u.steer * sin_d
             + front / p.mass * vy_vx * sin_d
             + front / p.mass * p.dist_front * wz_vx * sin_d
             - rolling * (cos_d - 1.0)
             - p.drag_lumped * s.vx * s.vx / p.mass
             + s.wz * s.vy;
    d.vy_dot = u.tractive_force / p.mass * sin_d
             + front / p.mass * u.steer * cos_d
             - front / p.mass * cos_d * vy_vx
             - rear / p.mass * vy_vx
             - front * p.dist_front / p.mass * cos_d * wz_vx
             + rear * p.dist_rear / p.mass * wz_vx
             - rolling * sin_d
             - s.wz * s.vx;
    d.wz_dot = p.dist_front / p.yaw_inertia * front * u.steer * cos_d
             - (front * p.dist_front * cos_d - rear * p.dist_rear) / p.yaw_inertia * vy_vx
             - (front * p.dist_front * p.dist_front * cos_d
                + rear * p.dist_rear * p.dist_rear) / p.yaw_inertia * wz_vx
             + p.dist_front / p.yaw_inertia * u.tractive_force * sin_d
             - rolling * p.mass * p.dist_front / p.yaw_inertia * sin_d;
    detail::pose_kinematics(s, d);
    return d;
}

/// Classical linear-tire single-track model. No rolling-friction terms; the
/// tractive-force doubling (1 + cos) is kept so force amplitudes stay
/// comparable with the generalized model.
inline StateDerivative rhs_reference(const VehicleState& s, const ControlInput& u,
                                     const VehicleParams& p) {
    detail::check_rhs_preconditions(s, u);

    const double sin_d = std::sin(u.steer);
    const double cos_d = std::cos(u.steer);
    const double fyf = 2.0 * p.cornering_front *
                       (u.steer - (s.vy + p.dist_front * s.wz) / s.vx);
    const double fyr = -2.0 * p.cornering_rear * (s.vy - p.dist_rear * s.wz) / s.vx;

    StateDerivative d;
    d.vx_dot = (u.tractive_force * (1.0 + cos_d) - fyf * sin_d
                - p.drag_lumped * s.vx * s.vx) / p.mass
             + s.wz * s.vy;
    d.vy_dot = (fyf * cos_d + fyr + u.tractive_force * sin_d) / p.mass - s.wz * s.vx;
    d.wz_dot = (p.dist_front * (fyf * cos_d + u.tractive_force * sin_d)
                - p.dist_rear * fyr) / p.yaw_inertia;
    detail::pose_kinematics(s, d);
    return d;
}

inline StateDerivative rhs(Model model, const VehicleState& s, const ControlInput& u,
                           const VehicleParams& p) {
    return model == Model::generalized ? rhs_generalized(s, u, p)
                                       : rhs_reference(s, u, p);
}

struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;
};

/// Coefficient matrix A of the frozen-vx lateral-yaw subsystem at zero steer:
/// (vy_dot, wz_dot) = A (vy, wz). Tractive force does not enter at zero steer.
inline Mat2 lateral_subsystem_matrix(double vx, const VehicleParams& p) {
    if (!(vx >= kVxFloor)) throw VxFloorError(vx);
    const double front = 2.0 * p.cornering_front;
    const double rear = 2.0 * p.cornering_rear;
    Mat2 a;
    a.a00 = -(front + rear) / (p.mass * vx);
    a.a01 = -(front * p.dist_front - rear * p.dist_rear) / (p.mass * vx) - vx;
    a.a10 = -(front * p.dist_front - rear * p.dist_rear) / (p.yaw_inertia * vx);
    a.a11 = -(front * p.dist_front * p.dist_front
              + rear * p.dist_rear * p.dist_rear) / (p.yaw_inertia * vx);
    return a;
}

}  // namespace singletrack
