// Command-line front end: config-driven simulation (`run`), control-parameter
// search (`tune`), and two-config side-by-side execution (`compare`).

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "singletrack/singletrack.hpp"

namespace fs = std::filesystem;

namespace {

using namespace singletrack;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;        // usage, config, or I/O errors; tune not recovered
constexpr int kExitDiagnosis = 2;    // simulation left the model's validity envelope

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (const char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
                   ? c : '_';
    return out.empty() ? std::string("run") : out;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
    if (!out) throw std::runtime_error("failed to write '" + path.string() + "'");
}

fs::path prepare_out_dir(const RunConfig& cfg) {
    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);
    return dir;
}

void print_summary(const std::string& label, const Trace& trace,
                   const RecoveryMetrics& m) {
    std::cout << label << ": recovered = " << (m.recovered ? "true" : "false");
    if (m.time_to_recovery)
        std::cout << " at t = " << detail::format_double(*m.time_to_recovery) << " s";
    std::cout << ", final |y| = " << detail::format_double(m.final_lateral_error)
              << " m, final |psi| = " << detail::format_double(m.final_heading_error)
              << " rad";
    if (trace.failure)
        std::cout << " [DIAGNOSIS: " << trace.failure->message << "]";
    std::cout << "\n";
}

int cmd_run(const std::string& config_path, bool no_control,
            const std::string& model_override, const std::string& out_override) {
    RunConfig cfg = load_config_file(config_path);
    std::string base = sanitize(cfg.scenario.label);
    if (!model_override.empty()) {
        cfg.sim.model = model_from_string(model_override);
        base += std::string("_") + to_string(cfg.sim.model);
    }
    if (no_control) {
        cfg.controls.steering.a1 = 0.0;
        cfg.controls.steering.a2 = 0.0;
        cfg.controls.force.a_c = 0.0;
        base += "_nocontrol";
    }
    if (!out_override.empty()) cfg.out_dir = out_override;

    const Trace trace = simulate(cfg.scenario, cfg.sim, cfg.controls, cfg.vehicle);
    const RecoveryMetrics m = compute_metrics(trace, cfg.thresholds);

    const fs::path dir = prepare_out_dir(cfg);
    std::ostringstream trace_text;
    write_trace_csv(trace_text, trace);
    write_file(dir / (base + "_trace.csv"), trace_text.str());
    std::ostringstream metrics_text;
    write_metrics(metrics_text, cfg, trace, m);
    write_file(dir / (base + "_metrics.txt"), metrics_text.str());

    print_summary(base, trace, m);
    std::cout << "wrote " << (dir / (base + "_trace.csv")).string() << ", "
              << (dir / (base + "_metrics.txt")).string() << "\n";
    return trace.failure ? kExitDiagnosis : kExitOk;
}

int cmd_tune(const std::string& config_path) {
    RunConfig cfg = load_config_file(config_path);
    if (!cfg.tune) throw ConfigError("config has no [tune] section");
    const std::string base = sanitize(cfg.scenario.label);

    TuneSpec spec = *cfg.tune;
    spec.seed = cfg.controls;
    const TuneResult result = tune(spec, cfg.scenario, cfg.sim, cfg.vehicle,
                                   cfg.thresholds);

    cfg.controls = result.best;  // echo what the best run used
    const Trace trace = simulate(cfg.scenario, cfg.sim, cfg.controls, cfg.vehicle);
    const RecoveryMetrics m = compute_metrics(trace, cfg.thresholds);

    const fs::path dir = prepare_out_dir(cfg);
    std::ostringstream trace_text;
    write_trace_csv(trace_text, trace);
    write_file(dir / (base + "_trace.csv"), trace_text.str());
    std::ostringstream metrics_text;
    write_metrics(metrics_text, cfg, trace, m);
    write_file(dir / (base + "_metrics.txt"), metrics_text.str());
    std::ostringstream history_text;
    write_tune_history(history_text, spec, result);
    write_file(dir / (base + "_history.csv"), history_text.str());

    std::cout << "tune " << base << ": best objective = "
              << detail::format_double(result.best_objective) << " after "
              << result.evaluations << " evaluations\n";
    print_summary(base, trace, m);
    if (trace.failure) return kExitDiagnosis;
    return m.recovered ? kExitOk : kExitError;
}

int cmd_compare(const std::string& path_a, const std::string& path_b) {
    RunConfig a = load_config_file(path_a);
    RunConfig b = load_config_file(path_b);

    const auto& sa = a.scenario;
    const auto& sb = b.scenario;
    const bool same_scenario = sa.vx0 == sb.vx0 && sa.vy0 == sb.vy0 &&
                               sa.wz0 == sb.wz0 && sa.x0 == sb.x0 && sa.y0 == sb.y0 &&
                               sa.psi0 == sb.psi0;
    if (!same_scenario || a.sim.horizon != b.sim.horizon)
        throw ConfigError("compare: configs must share scenario and horizon");
    if (a.sim.dt != b.sim.dt || a.sim.record_stride != b.sim.record_stride)
        throw ConfigError("compare: configs must share dt and record_stride "
                          "so traces merge row by row");

    std::string tag_a = a.sim.model == Model::generalized ? "g" : "m";
    std::string tag_b = b.sim.model == Model::generalized ? "g" : "m";
    if (tag_a == tag_b) {
        tag_a = "a";
        tag_b = "b";
    }

    const Trace ta = simulate(a.scenario, a.sim, a.controls, a.vehicle);
    const Trace tb = simulate(b.scenario, b.sim, b.controls, b.vehicle);
    const RecoveryMetrics ma = compute_metrics(ta, a.thresholds);
    const RecoveryMetrics mb = compute_metrics(tb, b.thresholds);

    const std::string base = "compare_" + sanitize(a.scenario.label) + "_vs_" +
                             sanitize(b.scenario.label);
    const fs::path dir = prepare_out_dir(a);
    std::ostringstream trace_text;
    write_compare_trace(trace_text, ta, tb, tag_a, tag_b);
    write_file(dir / (base + "_trace.csv"), trace_text.str());
    std::ostringstream metrics_text;
    write_compare_metrics(metrics_text, tag_a, a, ta, ma, tag_b, b, tb, mb);
    write_file(dir / (base + "_metrics.txt"), metrics_text.str());

    print_summary(sanitize(a.scenario.label) + " (" + tag_a + ")", ta, ma);
    print_summary(sanitize(b.scenario.label) + " (" + tag_b + ")", tb, mb);
    std::cout << "wrote " << (dir / (base + "_trace.csv")).string() << ", "
              << (dir / (base + "_metrics.txt")).string() << "\n";
    return (ta.failure || tb.failure) ? kExitDiagnosis : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Post-collision trajectory recovery simulator for single-track "
                 "vehicle models"};
    app.require_subcommand(1);

    std::string config_path, model_override, out_override, config_a, config_b;
    bool no_control = false;

    auto* run = app.add_subcommand("run", "Simulate one config and write trace + metrics");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--no-control", no_control,
                  "zero the steering and force pulses (cruise force only)");
    run->add_option("--model", model_override, "override the model")
        ->check(CLI::IsMember({"generalized", "reference"}));
    run->add_option("--out", out_override, "override the output directory");

    auto* tune_cmd = app.add_subcommand("tune", "Search the [tune] free parameters, "
                                                "then write the best run");
    tune_cmd->add_option("config", config_path, "config file with a [tune] section")
        ->required();

    auto* compare = app.add_subcommand("compare", "Run two configs on one scenario and "
                                                  "merge the outputs");
    compare->add_option("configA", config_a, "first config")->required();
    compare->add_option("configB", config_b, "second config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, no_control, model_override, out_override);
        if (tune_cmd->parsed()) return cmd_tune(config_path);
        return cmd_compare(config_a, config_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
