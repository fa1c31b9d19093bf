#pragma once

// Flat sectioned key-value configuration: [vehicle], [scenario], [sim],
// [steering], [force], [thresholds], [tune], [output]. Every omitted optional
// key takes its documented default; unknown keys and sections are rejected.
// dist_front and dist_rear must always be spelled out, and every resolved
// value (defaults included) is echoed back into the run outputs.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "singletrack/control.hpp"
#include "singletrack/metrics.hpp"
#include "singletrack/scenario.hpp"
#include "singletrack/simulate.hpp"
#include "singletrack/tuner.hpp"
#include "singletrack/vehicle.hpp"

namespace singletrack {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    VehicleParams vehicle;
    ScenarioSpec scenario;
    SimConfig sim;
    ControlLaws controls;
    RecoveryThresholds thresholds;
    std::optional<TuneSpec> tune;
    std::string out_dir = ".";
    std::string format_version = "1";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    void validate() const {
        vehicle.validate();
        scenario.validate();
        sim.validate();
        controls.steering.validate();
        controls.force.validate();
        thresholds.validate();
        if (tune) tune->validate();
    }
};

namespace detail {

struct RawEntry {
    std::string value;
    int line = 0;
    mutable bool used = false;
};

using RawSection = std::map<std::string, RawEntry>;
using RawConfig = std::map<std::string, std::pair<int, RawSection>>;  // name -> (line, entries)

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline RawConfig lex_config(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header '" + t + "'");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": empty section name");
            raw.try_emplace(section, line_no, RawSection{});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + t + "'");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        auto& entries = raw[section].second;
        if (!entries.emplace(key, RawEntry{value, line_no}).second)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "' in [" + section + "]");
    }
    return raw;
}

/// Typed access to one section; keys are marked used as they are read.
class SectionReader {
public:
    SectionReader(const RawConfig& raw, std::string name) : name_(std::move(name)) {
        const auto it = raw.find(name_);
        if (it != raw.end()) entries_ = &it->second.second;
    }

    bool present() const { return entries_ != nullptr; }

    bool has(const std::string& key) const {
        return entries_ && entries_->count(key) > 0;
    }

    std::optional<std::string> text(const std::string& key) const {
        if (!entries_) return std::nullopt;
        const auto it = entries_->find(key);
        if (it == entries_->end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string text_or(const std::string& key, const std::string& fallback) const {
        auto v = text(key);
        return v ? *v : fallback;
    }

    double number(const std::string& key, double fallback) const {
        const auto v = text(key);
        if (!v) return fallback;
        return parse_number(key, *v);
    }

    double required_number(const std::string& key) const {
        const auto v = text(key);
        if (!v)
            throw ConfigError("config: [" + name_ + "] is missing required key '" +
                              key + "'");
        return parse_number(key, *v);
    }

    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        const auto v = text(key);
        if (!v) return fallback;
        errno = 0;
        char* end = nullptr;
        const long long parsed = std::strtoll(v->c_str(), &end, 10);
        if (errno != 0 || end == v->c_str() || *end != '\0')
            throw ConfigError(key_context(key) + ": expected an integer, got '" + *v + "'");
        return parsed;
    }

private:
    double parse_number(const std::string& key, const std::string& v) const {
        errno = 0;
        char* end = nullptr;
        const double parsed = std::strtod(v.c_str(), &end);
        if (errno != 0 || end == v.c_str() || *end != '\0')
            throw ConfigError(key_context(key) + ": expected a number, got '" + v + "'");
        return parsed;
    }

    std::string key_context(const std::string& key) const {
        const auto it = entries_->find(key);
        return "config line " + std::to_string(it->second.line) + ": [" + name_ +
               "] " + key;
    }

    std::string name_;
    const RawSection* entries_ = nullptr;
};

inline void reject_unused(const RawConfig& raw) {
    static const std::set<std::string> known = {"vehicle", "scenario", "sim",
                                                "steering", "force", "thresholds",
                                                "tune", "output"};
    for (const auto& [section, body] : raw) {
        if (!known.count(section))
            throw ConfigError("config line " + std::to_string(body.first) +
                              ": unknown section [" + section + "]");
        for (const auto& [key, entry] : body.second)
            if (!entry.used)
                throw ConfigError("config line " + std::to_string(entry.line) +
                                  ": unknown key '" + key + "' in [" + section + "]");
    }
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    const detail::RawConfig raw = detail::lex_config(text);
    RunConfig cfg;

    {
        detail::SectionReader vehicle(raw, "vehicle");
        // Geometry must always be explicit; there is no authoritative default.
        cfg.vehicle.dist_front = vehicle.required_number("dist_front");
        cfg.vehicle.dist_rear = vehicle.required_number("dist_rear");
        cfg.vehicle.mass = vehicle.number("mass", cfg.vehicle.mass);
        cfg.vehicle.yaw_inertia = vehicle.number("yaw_inertia", cfg.vehicle.yaw_inertia);
        cfg.vehicle.cornering_front =
            vehicle.number("cornering_front", cfg.vehicle.cornering_front);
        cfg.vehicle.cornering_rear =
            vehicle.number("cornering_rear", cfg.vehicle.cornering_rear);
        cfg.vehicle.mu0 = vehicle.number("mu0", cfg.vehicle.mu0);
        cfg.vehicle.mu1 = vehicle.number("mu1", cfg.vehicle.mu1);
        cfg.vehicle.gravity = vehicle.number("gravity", cfg.vehicle.gravity);
        cfg.vehicle.drag_lumped = vehicle.number("drag_lumped", cfg.vehicle.drag_lumped);
    }
    {
        detail::SectionReader scenario(raw, "scenario");
        const auto named = scenario.text("case");
        if (named) {
            if (*named == "case1") cfg.scenario = case1();
            else if (*named == "case2") cfg.scenario = case2();
            else
                throw ConfigError("config: unknown scenario case '" + *named +
                                  "' (case1|case2)");
            for (const char* key : {"vx0", "vy0", "wz0", "x0", "y0", "psi0"})
                if (scenario.has(key))
                    throw ConfigError(std::string("config: [scenario] '") + key +
                                      "' conflicts with 'case = " + *named + "'");
        } else {
            cfg.scenario.vx0 = scenario.number("vx0", cfg.scenario.vx0);
            cfg.scenario.vy0 = scenario.number("vy0", cfg.scenario.vy0);
            cfg.scenario.wz0 = scenario.number("wz0", cfg.scenario.wz0);
            cfg.scenario.x0 = scenario.number("x0", cfg.scenario.x0);
            cfg.scenario.y0 = scenario.number("y0", cfg.scenario.y0);
            cfg.scenario.psi0 = scenario.number("psi0", cfg.scenario.psi0);
        }
        cfg.scenario.label = scenario.text_or("label", cfg.scenario.label);
    }
    {
        detail::SectionReader sim(raw, "sim");
        cfg.sim.dt = sim.number("dt", cfg.sim.dt);
        cfg.sim.horizon = sim.number("horizon", cfg.sim.horizon);
        cfg.sim.record_stride = sim.integer("record_stride", cfg.sim.record_stride);
        if (const auto m = sim.text("model")) {
            try {
                cfg.sim.model = model_from_string(*m);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config: [sim] model: ") + e.what());
            }
        }
    }
    {
        detail::SectionReader steering(raw, "steering");
        auto& s = cfg.controls.steering;
        s.a1 = steering.number("a1", s.a1);
        s.a2 = steering.number("a2", s.a2);
        s.k_dir = steering.number("k_dir", s.k_dir);
        s.tau0 = steering.number("tau0", s.tau0);
        s.tau1 = steering.number("tau1", s.tau1);
        s.tau2 = steering.number("tau2", s.tau2);
        s.tau3 = steering.number("tau3", s.tau3);
    }
    {
        detail::SectionReader force(raw, "force");
        auto& f = cfg.controls.force;
        f.a_c = force.number("a_c", f.a_c);
        f.tau_c1 = force.number("tau_c1", f.tau_c1);
        f.tau_c2 = force.number("tau_c2", f.tau_c2);
        if (force.has("f_initial")) {
            f.f_initial = force.required_number("f_initial");
        } else {
            // Default: the straight-line cruise force at the scenario speed.
            cfg.vehicle.validate();
            cfg.scenario.validate();
            f.f_initial = cruise_force(cfg.scenario.vx0, cfg.vehicle, cfg.sim.model);
        }
    }
    {
        detail::SectionReader thresholds(raw, "thresholds");
        cfg.thresholds.y_tol = thresholds.number("y_tol", cfg.thresholds.y_tol);
        cfg.thresholds.psi_tol = thresholds.number("psi_tol", cfg.thresholds.psi_tol);
        cfg.thresholds.hold = thresholds.number("hold", cfg.thresholds.hold);
    }
    {
        detail::SectionReader tune(raw, "tune");
        if (tune.present()) {
            TuneSpec spec;
            const auto free_list = tune.text("free");
            if (!free_list)
                throw ConfigError("config: [tune] is missing required key 'free'");
            for (const auto& name : detail::split_list(*free_list)) {
                TuneParam p;
                try {
                    p = tune_param_from_string(name);
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(std::string("config: [tune] free: ") + e.what());
                }
                for (const auto& existing : spec.free)
                    if (existing.param == p)
                        throw ConfigError("config: [tune] free lists '" + name +
                                          "' twice");
                FreeParam fp;
                fp.param = p;
                fp.lower = tune.required_number(name + "_min");
                fp.upper = tune.required_number(name + "_max");
                spec.free.push_back(fp);
            }
            spec.budget = static_cast<int>(tune.integer("budget", spec.budget));
            spec.weights.w_y = tune.number("w_y", spec.weights.w_y);
            spec.weights.w_psi = tune.number("w_psi", spec.weights.w_psi);
            spec.weights.w_time = tune.number("w_time", spec.weights.w_time);
            spec.seed = cfg.controls;
            cfg.tune = std::move(spec);
        }
    }
    {
        detail::SectionReader output(raw, "output");
        cfg.out_dir = output.text_or("dir", cfg.out_dir);
        cfg.format_version = output.text_or("format_version", cfg.format_version);
    }

    detail::reject_unused(raw);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

namespace detail {

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (std::strtod(buf, nullptr) == v) {
        // try to shorten
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
            if (std::strtod(shorter, nullptr) == v) return shorter;
        }
    }
    return buf;
}

}  // namespace detail

/// Full textual form of a resolved config; parse_config inverts it.
inline std::string render_config(const RunConfig& cfg) {
    using detail::format_double;
    std::ostringstream out;
    out << "[vehicle]\n";
    out << "mass = " << format_double(cfg.vehicle.mass) << "\n";
    out << "yaw_inertia = " << format_double(cfg.vehicle.yaw_inertia) << "\n";
    out << "dist_front = " << format_double(cfg.vehicle.dist_front) << "\n";
    out << "dist_rear = " << format_double(cfg.vehicle.dist_rear) << "\n";
    out << "cornering_front = " << format_double(cfg.vehicle.cornering_front) << "\n";
    out << "cornering_rear = " << format_double(cfg.vehicle.cornering_rear) << "\n";
    out << "mu0 = " << format_double(cfg.vehicle.mu0) << "\n";
    out << "mu1 = " << format_double(cfg.vehicle.mu1) << "\n";
    out << "gravity = " << format_double(cfg.vehicle.gravity) << "\n";
    out << "drag_lumped = " << format_double(cfg.vehicle.drag_lumped) << "\n";
    out << "\n[scenario]\n";
    out << "vx0 = " << format_double(cfg.scenario.vx0) << "\n";
    out << "vy0 = " << format_double(cfg.scenario.vy0) << "\n";
    out << "wz0 = " << format_double(cfg.scenario.wz0) << "\n";
    out << "x0 = " << format_double(cfg.scenario.x0) << "\n";
    out << "y0 = " << format_double(cfg.scenario.y0) << "\n";
    out << "psi0 = " << format_double(cfg.scenario.psi0) << "\n";
    out << "label = " << cfg.scenario.label << "\n";
    out << "\n[sim]\n";
    out << "dt = " << format_double(cfg.sim.dt) << "\n";
    out << "horizon = " << format_double(cfg.sim.horizon) << "\n";
    out << "model = " << to_string(cfg.sim.model) << "\n";
    out << "record_stride = " << cfg.sim.record_stride << "\n";
    out << "\n[steering]\n";
    out << "a1 = " << format_double(cfg.controls.steering.a1) << "\n";
    out << "a2 = " << format_double(cfg.controls.steering.a2) << "\n";
    out << "k_dir = " << format_double(cfg.controls.steering.k_dir) << "\n";
    out << "tau0 = " << format_double(cfg.controls.steering.tau0) << "\n";
    out << "tau1 = " << format_double(cfg.controls.steering.tau1) << "\n";
    out << "tau2 = " << format_double(cfg.controls.steering.tau2) << "\n";
    out << "tau3 = " << format_double(cfg.controls.steering.tau3) << "\n";
    out << "\n[force]\n";
    out << "f_initial = " << format_double(cfg.controls.force.f_initial) << "\n";
    out << "a_c = " << format_double(cfg.controls.force.a_c) << "\n";
    out << "tau_c1 = " << format_double(cfg.controls.force.tau_c1) << "\n";
    out << "tau_c2 = " << format_double(cfg.controls.force.tau_c2) << "\n";
    out << "\n[thresholds]\n";
    out << "y_tol = " << format_double(cfg.thresholds.y_tol) << "\n";
    out << "psi_tol = " << format_double(cfg.thresholds.psi_tol) << "\n";
    out << "hold = " << format_double(cfg.thresholds.hold) << "\n";
    if (cfg.tune) {
        out << "\n[tune]\n";
        out << "free = ";
        for (std::size_t i = 0; i < cfg.tune->free.size(); ++i)
            out << (i ? ", " : "") << to_string(cfg.tune->free[i].param);
        out << "\n";
        out << "budget = " << cfg.tune->budget << "\n";
        out << "w_y = " << format_double(cfg.tune->weights.w_y) << "\n";
        out << "w_psi = " << format_double(cfg.tune->weights.w_psi) << "\n";
        out << "w_time = " << format_double(cfg.tune->weights.w_time) << "\n";
        for (const auto& f : cfg.tune->free) {
            out << to_string(f.param) << "_min = " << format_double(f.lower) << "\n";
            out << to_string(f.param) << "_max = " << format_double(f.upper) << "\n";
        }
    }
    out << "\n[output]\n";
    out << "dir = " << cfg.out_dir << "\n";
    out << "format_version = " << cfg.format_version << "\n";
    return out.str();
}

}  // namespace singletrack
