#pragma once

// Serialization of traces, metrics, and tuning histories. Plain text, written
// whole-file per run; identical inputs produce byte-identical files.

#include <ostream>
#include <string>

#include "singletrack/config.hpp"
#include "singletrack/metrics.hpp"
#include "singletrack/simulate.hpp"
#include "singletrack/tuner.hpp"

namespace singletrack {

inline constexpr const char* kTraceHeader = "t,vx,vy,wz,x,y,psi,delta_s,f_xt";

namespace detail {

inline void write_sample_fields(std::ostream& out, const TraceSample& s) {
    out << format_double(s.t) << ',' << format_double(s.state.vx) << ','
        << format_double(s.state.vy) << ',' << format_double(s.state.wz) << ','
        << format_double(s.state.x) << ',' << format_double(s.state.y) << ','
        << format_double(s.state.psi) << ',' << format_double(s.input.steer) << ','
        << format_double(s.input.tractive_force);
}

}  // namespace detail

inline void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << kTraceHeader << '\n';
    for (const auto& s : trace.samples) {
        detail::write_sample_fields(out, s);
        out << '\n';
    }
}

/// Metrics plus the complete resolved configuration, so a result file alone
/// documents everything that produced it.
inline void write_metrics(std::ostream& out, const RunConfig& cfg, const Trace& trace,
                          const RecoveryMetrics& m) {
    using detail::format_double;
    out << render_config(cfg);
    out << "\n[metrics]\n";
    out << "recovered = " << (m.recovered ? "true" : "false") << "\n";
    out << "time_to_recovery = "
        << (m.time_to_recovery ? format_double(*m.time_to_recovery) : std::string("none"))
        << "\n";
    out << "peak_lateral_deviation = " << format_double(m.peak_lateral_deviation) << "\n";
    out << "peak_yaw_rate = " << format_double(m.peak_yaw_rate) << "\n";
    out << "peak_sideslip = " << format_double(m.peak_sideslip) << "\n";
    out << "final_lateral_error = " << format_double(m.final_lateral_error) << "\n";
    out << "final_heading_error = " << format_double(m.final_heading_error) << "\n";
    if (trace.failure) {
        out << "\n[diagnosis]\n";
        out << "time = " << format_double(trace.failure->time) << "\n";
        out << "message = " << trace.failure->message << "\n";
    }
}

inline void write_tune_history(std::ostream& out, const TuneSpec& spec,
                               const TuneResult& result) {
    out << "iter,objective";
    for (const auto& f : spec.free) out << ',' << to_string(f.param);
    out << '\n';
    for (const auto& e : result.history) {
        out << e.iter << ',' << detail::format_double(e.objective);
        for (const double v : e.values) out << ',' << detail::format_double(v);
        out << '\n';
    }
}

/// Merged two-run trace; the per-run column suffixes follow the model names
/// (g = generalized, m = reference) or a/b when both runs use the same model.
inline void write_compare_trace(std::ostream& out, const Trace& a, const Trace& b,
                                const std::string& suffix_a, const std::string& suffix_b) {
    const char* cols[] = {"vx", "vy", "wz", "x", "y", "psi", "delta_s", "f_xt"};
    out << 't';
    for (const char* c : cols) out << ',' << c << '_' << suffix_a;
    for (const char* c : cols) out << ',' << c << '_' << suffix_b;
    out << '\n';
    const std::size_t rows = std::min(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& sa = a.samples[i];
        const auto& sb = b.samples[i];
        using detail::format_double;
        out << format_double(sa.t);
        for (const double v : {sa.state.vx, sa.state.vy, sa.state.wz, sa.state.x,
                               sa.state.y, sa.state.psi, sa.input.steer,
                               sa.input.tractive_force})
            out << ',' << format_double(v);
        for (const double v : {sb.state.vx, sb.state.vy, sb.state.wz, sb.state.x,
                               sb.state.y, sb.state.psi, sb.input.steer,
                               sb.input.tractive_force})
            out << ',' << format_double(v);
        out << '\n';
    }
}

inline void write_compare_metrics(std::ostream& out, const std::string& suffix_a,
                                  const RunConfig& cfg_a, const Trace& trace_a,
                                  const RecoveryMetrics& ma, const std::string& suffix_b,
                                  const RunConfig& cfg_b, const Trace& trace_b,
                                  const RecoveryMetrics& mb) {
    out << "# run " << suffix_a << "\n";
    write_metrics(out, cfg_a, trace_a, ma);
    out << "\n# run " << suffix_b << "\n";
    write_metrics(out, cfg_b, trace_b, mb);
}

}  // namespace singletrack
