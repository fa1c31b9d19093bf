#pragma once

// Derivative-free tuning of the control parameters: bounded pattern search in
// the Hooke-Jeeves form. Exploratory polls move one parameter at a time
// (+/- step, fixed order); each successful poll is followed by pattern moves
// that extrapolate the accumulated displacement, which is what lets the search
// track the diagonal valleys this objective produces; a failed poll around the
// base halves every step. When the step collapses below 1e-4 of the range with
// budget left, the search restarts at the initial step size from the next point
// of a Halton sequence over the bounds box; restarting from the incumbent would
// deterministically replay the path that just collapsed. The returned best is
// the best over all starts.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "singletrack/control.hpp"
#include "singletrack/metrics.hpp"
#include "singletrack/scenario.hpp"
#include "singletrack/simulate.hpp"

namespace singletrack {

/// Every control-law field the tuner may vary.
enum class TuneParam {
    a1, a2, k_dir, tau0, tau1, tau2, tau3,
    f_initial, a_c, tau_c1, tau_c2,
};

inline constexpr std::array<TuneParam, 11> kAllTuneParams = {
    TuneParam::a1, TuneParam::a2, TuneParam::k_dir, TuneParam::tau0,
    TuneParam::tau1, TuneParam::tau2, TuneParam::tau3, TuneParam::f_initial,
    TuneParam::a_c, TuneParam::tau_c1, TuneParam::tau_c2,
};

inline const char* to_string(TuneParam p) {
    switch (p) {
        case TuneParam::a1: return "a1";
        case TuneParam::a2: return "a2";
        case TuneParam::k_dir: return "k_dir";
        case TuneParam::tau0: return "tau0";
        case TuneParam::tau1: return "tau1";
        case TuneParam::tau2: return "tau2";
        case TuneParam::tau3: return "tau3";
        case TuneParam::f_initial: return "f_initial";
        case TuneParam::a_c: return "a_c";
        case TuneParam::tau_c1: return "tau_c1";
        case TuneParam::tau_c2: return "tau_c2";
    }
    return "?";
}

inline TuneParam tune_param_from_string(const std::string& s) {
    for (TuneParam p : kAllTuneParams)
        if (s == to_string(p)) return p;
    throw std::invalid_argument("unknown tunable parameter '" + s + "'");
}

inline double get_param(const ControlLaws& c, TuneParam p) {
    switch (p) {
        case TuneParam::a1: return c.steering.a1;
        case TuneParam::a2: return c.steering.a2;
        case TuneParam::k_dir: return c.steering.k_dir;
        case TuneParam::tau0: return c.steering.tau0;
        case TuneParam::tau1: return c.steering.tau1;
        case TuneParam::tau2: return c.steering.tau2;
        case TuneParam::tau3: return c.steering.tau3;
        case TuneParam::f_initial: return c.force.f_initial;
        case TuneParam::a_c: return c.force.a_c;
        case TuneParam::tau_c1: return c.force.tau_c1;
        case TuneParam::tau_c2: return c.force.tau_c2;
    }
    throw std::logic_error("unreachable");
}

inline void set_param(ControlLaws& c, TuneParam p, double v) {
    switch (p) {
        case TuneParam::a1: c.steering.a1 = v; return;
        case TuneParam::a2: c.steering.a2 = v; return;
        case TuneParam::k_dir: c.steering.k_dir = v; return;
        case TuneParam::tau0: c.steering.tau0 = v; return;
        case TuneParam::tau1: c.steering.tau1 = v; return;
        case TuneParam::tau2: c.steering.tau2 = v; return;
        case TuneParam::tau3: c.steering.tau3 = v; return;
        case TuneParam::f_initial: c.force.f_initial = v; return;
        case TuneParam::a_c: c.force.a_c = v; return;
        case TuneParam::tau_c1: c.force.tau_c1 = v; return;
        case TuneParam::tau_c2: c.force.tau_c2 = v; return;
    }
}

struct FreeParam {
    TuneParam param = TuneParam::a1;
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const FreeParam&, const FreeParam&) = default;
};

/// Default w_psi prices a residual heading error by the lateral drift it
/// produces over the tail of the horizon (roughly vx * remaining time);
/// weighting it much lower leaves "crossing the track at the final sample"
/// as a spurious attractor.
struct ObjectiveWeights {
    double w_y = 1.0;
    double w_psi = 400.0;
    double w_time = 1.0;

    friend bool operator==(const ObjectiveWeights&, const ObjectiveWeights&) = default;
};

struct TuneSpec {
    std::vector<FreeParam> free;  // poll order is this order
    ObjectiveWeights weights;
    int budget = 2000;
    ControlLaws seed;
    bool restart_on_collapse = true;

    friend bool operator==(const TuneSpec&, const TuneSpec&) = default;

    void validate() const {
        if (free.empty()) throw std::invalid_argument("tune: no free parameters");
        for (const auto& f : free)
            if (!(f.lower < f.upper))
                throw std::invalid_argument(std::string("tune: infeasible bounds for ") +
                                            to_string(f.param));
        if (budget < 1) throw std::invalid_argument("tune: budget must be >= 1");
        const auto& w = weights;
        if (!(w.w_y >= 0.0 && w.w_psi >= 0.0 && w.w_time >= 0.0) ||
            !(w.w_y > 0.0 || w.w_psi > 0.0 || w.w_time > 0.0))
            throw std::invalid_argument(
                "tune: weights must be >= 0 with at least one positive");
    }
};

struct TuneEntry {
    int iter = 0;
    double objective = 0.0;
    std::vector<double> values;  // free-parameter values, spec order

    friend bool operator==(const TuneEntry&, const TuneEntry&) = default;
};

struct TuneResult {
    ControlLaws best;
    double best_objective = 0.0;
    int evaluations = 0;
    std::vector<TuneEntry> history;
};

inline constexpr double kFailurePenalty = 1e6;

/// Scalarizes recovery quality. Zero only for immediate perfect recovery.
inline double objective(const Trace& trace, const RecoveryMetrics& metrics,
                        const ObjectiveWeights& w) {
    double value = w.w_y * metrics.final_lateral_error +
                   w.w_psi * metrics.final_heading_error +
                   w.w_time * (metrics.recovered ? *metrics.time_to_recovery
                                                 : trace.config.horizon);
    if (trace.failed()) value += kFailurePenalty;
    return value;
}

namespace detail {

inline bool candidate_valid(const ControlLaws& c) {
    try {
        c.steering.validate();
        c.force.validate();
    } catch (const std::invalid_argument&) {
        return false;
    }
    return true;
}

inline double halton(std::size_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

inline constexpr std::array<unsigned, 8> kHaltonBases = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace detail

/// Pattern search over spec.free, seeded at spec.seed (clamped into bounds).
/// Deterministic: same spec, same result. Candidates that violate the control
/// invariants (window ordering, amplitude bound) are rejected without costing
/// an evaluation.
inline TuneResult tune(const TuneSpec& spec, const ScenarioSpec& scenario,
                       const SimConfig& sim, const VehicleParams& params,
                       const RecoveryThresholds& thresholds) {
    spec.validate();
    const std::size_t dim = spec.free.size();

    ControlLaws seed = spec.seed;
    for (const auto& f : spec.free) {
        const double v = std::clamp(get_param(seed, f.param), f.lower, f.upper);
        set_param(seed, f.param, v);
    }
    if (!detail::candidate_valid(seed))
        throw std::invalid_argument("tune: seed violates control invariants");

    std::vector<double> range(dim), lower(dim), upper(dim), base(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        lower[i] = spec.free[i].lower;
        upper[i] = spec.free[i].upper;
        range[i] = upper[i] - lower[i];
        base[i] = get_param(seed, spec.free[i].param);
    }

    auto make_laws = [&](const std::vector<double>& v) {
        ControlLaws laws = seed;
        for (std::size_t i = 0; i < dim; ++i) set_param(laws, spec.free[i].param, v[i]);
        return laws;
    };

    TuneResult result;
    result.best = seed;
    auto evaluate = [&](const std::vector<double>& v) {
        const ControlLaws laws = make_laws(v);
        Trace trace = simulate(scenario, sim, laws, params);
        const double f = objective(trace, compute_metrics(trace, thresholds), spec.weights);
        TuneEntry entry;
        entry.iter = result.evaluations++;
        entry.objective = f;
        entry.values = v;
        result.history.push_back(std::move(entry));
        if (result.history.size() == 1 || f < result.best_objective) {
            result.best = laws;
            result.best_objective = f;
        }
        return f;
    };
    auto valid = [&](const std::vector<double>& v) {
        return detail::candidate_valid(make_laws(v));
    };
    auto budget_left = [&] { return result.evaluations < spec.budget; };

    std::vector<double> step(dim);
    // One +/- poll sweep in fixed parameter order, keeping gains per parameter.
    auto explore = [&](std::vector<double> x, double fx) {
        for (std::size_t i = 0; i < dim && budget_left(); ++i) {
            for (const double sign : {1.0, -1.0}) {
                if (!budget_left()) break;
                const double moved = std::clamp(x[i] + sign * step[i], lower[i], upper[i]);
                if (moved == x[i]) continue;
                std::vector<double> candidate = x;
                candidate[i] = moved;
                if (!valid(candidate)) continue;  // rejected, not evaluated
                const double fc = evaluate(candidate);
                if (fc < fx) {
                    x = std::move(candidate);
                    fx = fc;
                    break;
                }
            }
        }
        return std::pair{x, fx};
    };

    double f_base = evaluate(base);
    std::size_t start_index = 0;
    while (budget_left()) {
        for (std::size_t i = 0; i < dim; ++i) step[i] = 0.1 * range[i];
        auto step_alive = [&] {
            for (std::size_t i = 0; i < dim; ++i)
                if (step[i] / range[i] >= 1e-4) return true;
            return false;
        };

        while (budget_left() && step_alive()) {
            auto [x, fx] = explore(base, f_base);
            if (!(fx < f_base)) {
                for (auto& s : step) s *= 0.5;
                continue;
            }
            // Pattern moves: extrapolate the accepted displacement and poll
            // around the extrapolated point while that keeps paying off.
            std::vector<double> previous = base;
            base = std::move(x);
            f_base = fx;
            while (budget_left()) {
                std::vector<double> pattern(dim);
                for (std::size_t i = 0; i < dim; ++i)
                    pattern[i] = std::clamp(2.0 * base[i] - previous[i], lower[i], upper[i]);
                if (pattern == base || !valid(pattern)) break;
                const double f_pattern = evaluate(pattern);
                auto [y, fy] = explore(pattern, f_pattern);
                if (!(fy < f_base)) break;
                previous = base;
                base = std::move(y);
                f_base = fy;
            }
        }
        if (!spec.restart_on_collapse) break;

        // next deterministic start; skip points violating control invariants
        bool restarted = false;
        while (budget_left()) {
            ++start_index;
            std::vector<double> next(dim);
            for (std::size_t i = 0; i < dim; ++i)
                next[i] = lower[i] +
                          detail::halton(start_index,
                                         detail::kHaltonBases[i % detail::kHaltonBases.size()]) *
                              range[i];
            if (!valid(next)) continue;
            base = std::move(next);
            f_base = evaluate(base);
            restarted = true;
            break;
        }
        if (!restarted) break;
    }
    return result;
}

}  // namespace singletrack
