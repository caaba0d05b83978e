#include "commands.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

#include "eitmem/analysis.hpp"
#include "eitmem/comparison.hpp"
#include "eitmem/csv.hpp"
#include "eitmem/regime.hpp"
#include "eitmem/solver.hpp"

namespace eitmem::cli {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code(ErrorCategory category)
{
    switch (category) {
    case ErrorCategory::invalid_input:
    case ErrorCategory::config:
        return 2;
    case ErrorCategory::physics_validity:
        return 3;
    case ErrorCategory::numerics:
    case ErrorCategory::io:
        return 4;
    }
    return 4;
}

namespace {

using Window = std::pair<double, double>;

std::vector<double> track_times(double horizon, double dt)
{
    std::vector<double> t;
    const auto n = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    for (std::size_t j = 0; j <= n; ++j) {
        t.push_back(static_cast<double>(j) * dt);
    }
    if (horizon - t.back() > 1e-9 * dt) {
        t.push_back(horizon);
    }
    return t;
}

struct Windows
{
    std::optional<Window> on;
    std::optional<Window> off;
};

Windows measurement_windows(const Scenario& s, const MediumParams& m)
{
    Windows w;
    const double turn = s.schedule.turn_time();
    const double guard = std::isfinite(turn) ? 3.0 * turn : 0.0;
    for (const TimeWindow& tw : steady_windows(s.schedule, m, s.horizon, guard)) {
        if (tw.control_on && !w.on) {
            w.on = Window{tw.t0, tw.t1};
        }
        if (!tw.control_on && !w.off) {
            w.off = Window{tw.t0, tw.t1};
        }
    }
    const AnalysisSettings& a = s.analysis;
    if (a.on_window_start && a.on_window_end) {
        w.on = Window{*a.on_window_start, *a.on_window_end};
    }
    if (a.off_window_start && a.off_window_end) {
        w.off = Window{*a.off_window_start, *a.off_window_end};
    }
    return w;
}

double mean_velocity(const MediumParams& m, const ControlSchedule& sch, Window w)
{
    return accumulate_exponent(m, sch, w.first, w.second).I_w.real() / (w.second - w.first);
}

json validity_json(const ValidityReport& v)
{
    auto ratio = [](const RatioCheck& r) { return json{{"ratio", r.ratio}, {"pass", r.pass}, {"strong", r.strong}}; };
    return json{{"pass", v.pass()},
                {"failures", v.failures()},
                {"high_density", ratio(v.high_density)},
                {"adiabatic_length", ratio(v.adiabatic_length)},
                {"adiabatic_time", ratio(v.adiabatic_time)},
                {"adiabatic_parameter", {{"value", v.adiabatic_parameter}, {"pass", v.adiabatic_parameter_pass}}},
                {"low_intensity", {{"ratio", v.low_intensity_ratio}, {"pass", v.low_intensity_pass}}},
                {"notes", v.notes}};
}

json limits_json(const DesignLimits& d, double L_p, double T0)
{
    return json{{"L_p", L_p},
                {"T0", T0},
                {"delta_p_max", d.delta_p_max},
                {"delta_max", d.delta_max},
                {"bw_limit", d.bw_limit},
                {"bw_mismatch_limit", d.bw_mismatch_limit},
                {"t_transit_max", d.t_transit_max},
                {"notes", d.notes}};
}

json distortion_json(const DistortionReport& d)
{
    return json{{"verdict", d.verdict()},
                {"aligned_l2", d.aligned_l2},
                {"shift", d.shift},
                {"phase_shift", d.phase_shift},
                {"imag_fraction", d.imag_fraction},
                {"high_k_fraction", d.high_k_fraction},
                {"input_high_k_fraction", d.input_high_k_fraction}};
}

fs::path prepare_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        fail(ErrorCategory::io, "cannot create output directory '" + dir + "': " + ec.message());
    }
    return fs::path(dir);
}

std::ofstream open_out(const fs::path& p)
{
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        fail(ErrorCategory::io, "cannot write '" + p.string() + "'");
    }
    return f;
}

void write_json(const fs::path& p, const json& j)
{
    auto f = open_out(p);
    f << j.dump(2) << "\n";
}

// Records analysis failures instead of aborting the run.
template <class F>
void attempt(json& errors, const char* what, F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        errors.push_back(fmt::format("{}: {} ({})", what, e.what(), to_string(e.category())));
    }
}

} // namespace

json summarize(const Scenario& s, const SimulationResult& result)
{
    const MediumParams m = s.effective_medium();
    const FieldGrid& psi0 = result.snapshots.front().psi;
    json j;
    json errors = json::array();
    if (result.validity) {
        j["validity"] = validity_json(*result.validity);
    }
    j["warnings"] = result.warnings;
    j["v_g_min"] = v_g_min(m);

    const Windows win = measurement_windows(s, m);
    std::optional<PulseTrack> track;
    attempt(errors, "track", [&] {
        const SimulationResult fine =
            evolve(m, s.schedule, psi0, track_times(s.horizon, s.analysis.track_dt), SimulationOptions{});
        track = track_pulse(fine);
    });
    auto velocity = [&](const char* key, const std::optional<Window>& w) {
        if (!w) {
            j[key] = nullptr;
            return;
        }
        json v{{"window", {w->first, w->second}}};
        attempt(errors, key, [&] { v["predicted"] = mean_velocity(m, s.schedule, *w); });
        if (track) {
            attempt(errors, key, [&] { v["measured"] = fit_velocity(*track, w->first, w->second).slope; });
        }
        j[key] = v;
    };
    velocity("v_g_on", win.on);
    velocity("v_g_off", win.off);

    if (track) {
        const Window w = win.off.value_or(win.on.value_or(Window{0.0, s.horizon}));
        json d{{"window", {w.first, w.second}}, {"predicted", m.gamma_bc}};
        attempt(errors, "decay_rate", [&] {
            const DecayFit fit = fit_decay(*track, w.first, w.second);
            d["measured"] = fit.rate;
            d["residual_rms"] = fit.residual_rms;
            if (fit.poor_fit) {
                d["warning"] = fit.warning;
            }
        });
        j["decay_rate"] = d;
    }

    const double t_out = s.analysis.output_time;
    json out{{"time", t_out}};
    attempt(errors, "output", [&] {
        const SimulationResult r = evolve(m, s.schedule, psi0, {0.0, t_out}, SimulationOptions{});
        const FieldGrid& psi_out = r.snapshots.back().psi;
        const PeakEstimate peak = locate_peak(psi_out);
        out["measured_peak"] = peak.amplitude;
        out["measured_z"] = peak.z;
        if (m.on_resonance()) {
            const PredictedOutput simple = predict_output(m, s.schedule, psi0, 0.0, t_out, PredictMode::simple);
            const PredictedOutput exact = predict_output(m, s.schedule, psi0, 0.0, t_out, PredictMode::exact);
            out["predicted_peak_simple"] = std::abs(s.pulse.amplitude) * simple.amplitude_factor;
            out["predicted_peak_exact"] = std::abs(s.pulse.amplitude) * exact.amplitude_factor;
            out["predicted_displacement"] = simple.displacement;
        }
        j["distortion"] = distortion_json(measure_distortion(psi0, psi_out, s.analysis.distortion_threshold));
    });
    j["output"] = out;

    attempt(errors, "limits", [&] {
        j["limits"] = limits_json(design_limits(m, s.analysis.L_p, s.analysis.T0), s.analysis.L_p, s.analysis.T0);
    });
    const LowIntensityReport li = check_low_intensity(result, m, s.schedule);
    j["low_intensity"] = {{"max_ratio", li.max_ratio}, {"pass", li.pass}, {"flagged_times", li.flagged_times}};
    j["max_log_gain"] = result.max_log_gain;
    j["analysis_errors"] = errors;
    return j;
}

int cmd_run(const std::string& scenario_file, const RunFlags& flags, std::ostream& out)
{
    Scenario s = load_scenario(scenario_file);
    if (flags.snapshot_dt) {
        s.snapshot_dt = *flags.snapshot_dt;
    }
    if (flags.out_dir) {
        s.output.out_dir = *flags.out_dir;
    }
    s.validate();
    const MediumParams m = s.effective_medium();

    SimulationOptions opts;
    opts.force = flags.force;
    opts.record_trace = s.output.trace;
    SimulationResult result = simulate(m, s.grid, s.pulse, s.schedule, s.horizon, s.snapshot_dt, opts);
    if (s.dipole) {
        if (auto w = dipole_consistency_warning(m, *s.dipole)) {
            result.warnings.push_back(*w);
        }
    }
    for (const auto& w : result.warnings) {
        out << "warning: " << w << "\n";
    }

    const fs::path dir = prepare_dir(s.output.out_dir);
    if (s.output.snapshots) {
        auto f = open_out(dir / "snapshots.csv");
        write_snapshots_csv(f, result);
    }
    if (s.output.trace) {
        auto f = open_out(dir / "trace.csv");
        write_trace_csv(f, result.coefficient_trace);
    }
    json summary = summarize(s, result);

    if (flags.oracle || s.oracle.enabled) {
        OracleConfig cfg;
        cfg.dt = s.oracle.dt;
        cfg.scheme = s.oracle.scheme;
        cfg.stiff_handling = s.oracle.stiff_handling;
        cfg.c_scale = s.c_scale;
        cfg.snapshot_dt = s.snapshot_dt;
        const OracleState seed = seed_oracle_state(m, s.schedule, result.snapshots.front().psi, 0.0);
        const auto states = integrate_reduced(s.medium, s.grid, seed, s.schedule, s.horizon, cfg);
        {
            auto f = open_out(dir / "oracle.csv");
            write_oracle_csv(f, states, cfg, s.medium, s.schedule);
        }
        json cmp = json::array();
        for (Observable o : {Observable::e, Observable::sigma_bc}) {
            const DiscrepancyReport rep = compare_to_adiabatic(states, s.medium, s.c_scale, result, o);
            json snaps = json::array();
            for (const auto& d : rep.snapshots) {
                snaps.push_back({{"t", d.t}, {"linf_rel", d.linf_rel}, {"l2_rel", d.l2_rel}});
            }
            cmp.push_back({{"observable", to_string(o)},
                           {"max_linf_rel", rep.max_linf_rel},
                           {"max_l2_rel", rep.max_l2_rel},
                           {"adiabatic_length_ratio", rep.adiabatic_length_ratio},
                           {"adiabatic_time_ratio", rep.adiabatic_time_ratio},
                           {"high_density_ratio", rep.high_density_ratio},
                           {"adiabatic_parameter", rep.adiabatic_parameter},
                           {"attributed_to", rep.attributed_to},
                           {"snapshots", snaps}});
        }
        write_json(dir / "comparison.json", json{{"scheme", to_string(cfg.scheme)}, {"dt", cfg.dt}, {"runs", cmp}});
        summary["oracle_max_linf_rel_E"] = cmp[0]["max_linf_rel"];
    }
    write_json(dir / "summary.json", summary);
    out << "wrote " << dir.string() << "\n";
    return 0;
}

int cmd_limits(const std::string& scenario_file, std::optional<double> L_p, std::optional<double> T0,
               std::ostream& out)
{
    const Scenario s = load_scenario(scenario_file);
    const double lp = L_p.value_or(s.analysis.L_p);
    const double t0 = T0.value_or(s.analysis.T0);
    const DesignLimits d = design_limits(s.effective_medium(), lp, t0);
    out << fmt::format("{:<20} {:>14}  {}\n", "limit", "value", "unit");
    out << fmt::format("{:<20} {:>14.6g}  rad/s\n", "delta_p_max", d.delta_p_max);
    out << fmt::format("{:<20} {:>14.6g}  rad/s\n", "delta_max", d.delta_max);
    out << fmt::format("{:<20} {:>14.6g}  rad/s\n", "bw_mismatch_limit", d.bw_mismatch_limit);
    out << fmt::format("{:<20} {:>14.6g}  rad/s\n", "bw_limit", d.bw_limit);
    out << fmt::format("{:<20} {:>14.6g}  s\n", "t_transit_max", d.t_transit_max);
    out << limits_json(d, lp, t0).dump() << "\n";
    return 0;
}

SweepAxis parse_sweep_axis(const std::string& s)
{
    if (s == "delta") {
        return SweepAxis::delta;
    }
    if (s == "delta_p") {
        return SweepAxis::delta_p;
    }
    if (s == "gamma_bc") {
        return SweepAxis::gamma_bc;
    }
    if (s == "gamma_ba") {
        return SweepAxis::gamma_ba;
    }
    fail(ErrorCategory::config, "unknown sweep axis '" + s + "' (expected delta, delta_p, gamma_bc, gamma_ba)");
}

std::string to_string(SweepAxis a)
{
    switch (a) {
    case SweepAxis::delta:
        return "delta";
    case SweepAxis::delta_p:
        return "delta_p";
    case SweepAxis::gamma_bc:
        return "gamma_bc";
    case SweepAxis::gamma_ba:
        return "gamma_ba";
    }
    return "delta";
}

namespace {

SweepRow sweep_row(Scenario s, SweepAxis axis, double value, bool force)
{
    SweepRow row;
    row.value = value;
    try {
        switch (axis) {
        case SweepAxis::delta:
            s.medium.delta = value;
            break;
        case SweepAxis::delta_p:
            s.medium.delta_p = value;
            break;
        case SweepAxis::gamma_bc:
            s.medium.gamma_bc = value;
            break;
        case SweepAxis::gamma_ba:
            s.medium.gamma_ba = value;
            break;
        }
        const MediumParams m = s.effective_medium();
        m.validate();
        if (!force) {
            const ValidityReport v = check_regime(m, s.pulse, s.schedule, s.schedule.turn_time());
            if (!v.pass()) {
                std::string failed;
                for (const auto& f : v.failures()) {
                    failed += (failed.empty() ? "" : ", ") + f;
                }
                fail(ErrorCategory::physics_validity, "regime check failed: " + failed);
            }
        }
        const FieldGrid psi0 = sample_pulse(s.grid, s.pulse);
        const double t_out = s.analysis.output_time;
        const SimulationResult r = evolve(m, s.schedule, psi0, {0.0, t_out});
        const FieldGrid& psi_out = r.snapshots.back().psi;
        row.output_peak = locate_peak(psi_out).amplitude;
        const DistortionReport d = measure_distortion(psi0, psi_out, s.analysis.distortion_threshold);
        row.verdict = d.verdict();
        row.aligned_l2 = d.aligned_l2;
        row.phase_shift = d.phase_shift;
        row.imag_fraction = d.imag_fraction;
        row.high_k_fraction = d.high_k_fraction;
        const Windows w = measurement_windows(s, m);
        if (w.off) {
            std::vector<double> times;
            const double step = s.analysis.track_dt;
            for (double t = w.off->first; t <= w.off->second + 1e-9 * step; t += step) {
                times.push_back(t);
            }
            const FieldGrid start = evolve(m, s.schedule, psi0, {0.0, w.off->first}).snapshots.back().psi;
            if (times.size() >= 2) {
                row.v_g_off = fit_velocity(track_pulse(evolve(m, s.schedule, start, times)), w.off->first,
                                           w.off->second)
                                  .slope;
            }
        }
        row.ok = true;
    } catch (const Error& e) {
        row.ok = false;
        row.error = e.what();
        row.error_category = to_string(e.category());
    }
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const Scenario& scenario, SweepAxis axis, const std::vector<double>& values,
                                bool force, unsigned jobs)
{
    require(values.size() <= 1000, ErrorCategory::config, "a sweep takes at most 1000 values");
    for (double v : values) {
        require(std::isfinite(v), ErrorCategory::config, "sweep values must be finite");
    }
    std::vector<SweepRow> rows(values.size());
    const std::size_t batch = std::max(1u, jobs);
    for (std::size_t i = 0; i < values.size(); i += batch) {
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t j = i; j < std::min(values.size(), i + batch); ++j) {
            pending.push_back(std::async(batch > 1 ? std::launch::async : std::launch::deferred, sweep_row,
                                         scenario, axis, values[j], force));
        }
        for (std::size_t j = 0; j < pending.size(); ++j) {
            rows[i + j] = pending[j].get();
        }
    }
    return rows;
}

int cmd_sweep(const std::string& scenario_file, SweepAxis axis, const std::vector<double>& values,
              const RunFlags& flags, unsigned jobs, std::ostream& out)
{
    Scenario s = load_scenario(scenario_file);
    if (flags.out_dir) {
        s.output.out_dir = *flags.out_dir;
    }
    const std::vector<SweepRow> rows = run_sweep(s, axis, values, flags.force, jobs);

    std::string csv = to_string(axis) +
                      ",ok,output_peak,verdict,aligned_l2,phase_shift,imag_fraction,high_k_fraction,v_g_off,error\n";
    out << fmt::format("{:>14} {:>12} {:>10} {:>12} {:>12} {:>12}\n", to_string(axis), "output_peak", "verdict",
                       "aligned_l2", "phase", "v_g_off");
    for (const SweepRow& r : rows) {
        const std::string vg = r.v_g_off ? format_number(*r.v_g_off) : "";
        if (r.ok) {
            csv += fmt::format("{:.17g},true,{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{},\n", r.value,
                               r.output_peak, r.verdict, r.aligned_l2, r.phase_shift, r.imag_fraction,
                               r.high_k_fraction, vg);
            out << fmt::format("{:>14.6g} {:>12.6g} {:>10} {:>12.4g} {:>12.4g} {:>12}\n", r.value, r.output_peak,
                               r.verdict, r.aligned_l2, r.phase_shift,
                               r.v_g_off ? fmt::format("{:.6g}", *r.v_g_off) : "-");
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), '"', '\'');
            csv += fmt::format("{:.17g},false,,,,,,,,\"{}: {}\"\n", r.value, r.error_category, msg);
            out << fmt::format("{:>14.6g} error[{}]: {}\n", r.value, r.error_category, r.error);
        }
    }
    const fs::path dir = prepare_dir(s.output.out_dir);
    auto f = open_out(dir / "sweep.csv");
    f << csv;
    return 0;
}

int cmd_validate(const std::string& scenario_file, std::ostream& out)
{
    const Scenario s = load_scenario(scenario_file);
    const MediumParams m = s.effective_medium();
    const ValidityReport v = check_regime(m, s.pulse, s.schedule, s.schedule.turn_time());
    json j = validity_json(v);
    if (s.dipole) {
        if (auto w = dipole_consistency_warning(m, *s.dipole)) {
            j["warnings"].push_back(*w);
        }
    }
    out << j.dump(2) << "\n";
    return v.pass() ? 0 : exit_code(ErrorCategory::physics_validity);
}

} // namespace eitmem::cli
