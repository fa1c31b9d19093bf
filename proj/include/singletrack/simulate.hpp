#pragma once

// Fixed-step RK4 integration of a selected model under the control laws.
// Control inputs are time-dependent and re-evaluated at each RK4 stage time.
// Sample timestamps are computed by multiplication, never by accumulation.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singletrack/control.hpp"
#include "singletrack/dynamics.hpp"
#include "singletrack/scenario.hpp"
#include "singletrack/vehicle.hpp"

namespace singletrack {

struct SimConfig {
    double dt = 1e-3;         // s, integration step
    double horizon = 20.0;    // s
    Model model = Model::generalized;
    std::int64_t record_stride = 10;  // record every n-th step

    friend bool operator==(const SimConfig&, const SimConfig&) = default;

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("sim: dt must be > 0");
        if (!(horizon >= dt) || !std::isfinite(horizon))
            throw std::invalid_argument("sim: horizon must be >= dt");
        if (record_stride < 1)
            throw std::invalid_argument("sim: record_stride must be >= 1");
    }
};

struct TraceSample {
    double t = 0.0;
    VehicleState state;
    ControlInput input;
};

/// In-band diagnosis of a simulation that left the model's validity envelope.
struct FailureDiagnosis {
    double time = 0.0;
    std::string message;
};

/// Time-sampled simulation output plus a snapshot of everything that produced it.
struct Trace {
    std::vector<TraceSample> samples;
    SimConfig config;
    VehicleParams vehicle;
    ControlLaws controls;
    ScenarioSpec scenario;
    std::optional<FailureDiagnosis> failure;

    bool failed() const { return failure.has_value(); }
};

namespace detail {

inline VehicleState advanced(const VehicleState& s, const StateDerivative& d, double h) {
    return VehicleState{s.vx + h * d.vx_dot, s.vy + h * d.vy_dot, s.wz + h * d.wz_dot,
                        s.x + h * d.x_dot,   s.y + h * d.y_dot,   s.psi + h * d.psi_dot};
}

}  // namespace detail

/// Any callable with the model right-hand-side shape can be integrated; the
/// Model overload below is the production entry point.
template <typename Fn>
concept RhsFunction = std::invocable<Fn, const VehicleState&, const ControlInput&,
                                     const VehicleParams&>;

/// One classical RK4 step from t to t + dt with stage-correct control
/// evaluation. A vx-floor violation is rethrown annotated with the step time.
template <RhsFunction Fn>
VehicleState step_rk4(const VehicleState& state, double t, double dt, Fn&& rhs_fn,
                      const ControlLaws& controls, const VehicleParams& params) {
    const ControlInput u0 = controls.at(t);
    const ControlInput um = controls.at(t + dt / 2.0);
    const ControlInput u1 = controls.at(t + dt);
    try {
        const StateDerivative k1 = rhs_fn(state, u0, params);
        const StateDerivative k2 = rhs_fn(detail::advanced(state, k1, dt / 2.0), um, params);
        const StateDerivative k3 = rhs_fn(detail::advanced(state, k2, dt / 2.0), um, params);
        const StateDerivative k4 = rhs_fn(detail::advanced(state, k3, dt), u1, params);
        VehicleState next;
        next.vx = state.vx + dt / 6.0 * (k1.vx_dot + 2.0 * k2.vx_dot + 2.0 * k3.vx_dot + k4.vx_dot);
        next.vy = state.vy + dt / 6.0 * (k1.vy_dot + 2.0 * k2.vy_dot + 2.0 * k3.vy_dot + k4.vy_dot);
        next.wz = state.wz + dt / 6.0 * (k1.wz_dot + 2.0 * k2.wz_dot + 2.0 * k3.wz_dot + k4.wz_dot);
        next.x = state.x + dt / 6.0 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot);
        next.y = state.y + dt / 6.0 * (k1.y_dot + 2.0 * k2.y_dot + 2.0 * k3.y_dot + k4.y_dot);
        next.psi = state.psi + dt / 6.0 * (k1.psi_dot + 2.0 * k2.psi_dot + 2.0 * k3.psi_dot + k4.psi_dot);
        return next;
    } catch (const VxFloorError& e) {
        throw VxFloorError(e.vx(), t);
    }
}

inline VehicleState step_rk4(const VehicleState& state, double t, double dt, Model model,
                             const ControlLaws& controls, const VehicleParams& params) {
    return step_rk4(
        state, t, dt,
        [model](const VehicleState& s, const ControlInput& u, const VehicleParams& p) {
            return rhs(model, s, u, p);
        },
        controls, params);
}

/// Integrate the scenario from its post-impact state at t = 0 to the horizon.
/// On a vx-floor violation the partial trace is returned with the failure
/// diagnosis attached; nothing is thrown.
inline Trace simulate(const ScenarioSpec& scenario, const SimConfig& sim,
                      const ControlLaws& controls, const VehicleParams& params) {
    params.validate();
    scenario.validate();
    sim.validate();
    controls.steering.validate();
    controls.force.validate();

    Trace trace;
    trace.config = sim;
    trace.vehicle = params;
    trace.controls = controls;
    trace.scenario = scenario;

    const auto n_steps = static_cast<std::int64_t>(std::llround(sim.horizon / sim.dt));
    trace.samples.reserve(static_cast<std::size_t>(n_steps / sim.record_stride) + 1);

    VehicleState state = scenario.initial_state();
    trace.samples.push_back({0.0, state, controls.at(0.0)});
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * sim.dt;
        try {
            state = step_rk4(state, t, sim.dt, sim.model, controls, params);
        } catch (const VxFloorError& e) {
            trace.failure = FailureDiagnosis{e.time(), e.what()};
            break;
        }
        if ((k + 1) % sim.record_stride == 0) {
            const double tk = static_cast<double>(k + 1) * sim.dt;
            trace.samples.push_back({tk, state, controls.at(tk)});
        }
    }
    return trace;
}

}  // namespace singletrack
