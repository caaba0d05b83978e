#include "eitmem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eitmem/error.hpp"
#include "eitmem/fft.hpp"
#include "eitmem/polariton.hpp"

namespace eitmem {

SpectralState forward_transform(const FieldGrid& f)
{
    f.grid.validate();
    SpectralState state;
    state.grid = f.grid;
    state.k = f.grid.wavenumbers();
    state.modes = fft::forward(f.values);
    return state;
}

FieldGrid inverse_transform(const SpectralState& state)
{
    return FieldGrid(state.grid, fft::inverse(state.modes));
}

ExponentIntegral accumulate_exponent(const MediumParams& params, const ControlSchedule& schedule,
                                     double t0, double t1, const QuadratureSpec& quad, bool record_nodes)
{
    require(t1 >= t0, ErrorCategory::invalid_input, "accumulate_exponent needs t1 >= t0");
    ExponentIntegral out;
    if (t1 == t0) {
        return out;
    }

    std::vector<double> cuts{t0};
    for (double b : schedule.breakpoints()) {
        if (b > t0 && b < t1) {
            cuts.push_back(b);
        }
    }
    cuts.push_back(t1);

    const std::function<std::array<double, 4>(double)> integrand = [&](double t) {
        const ControlState cs = eval_schedule(schedule, params, t);
        const CoefficientSample c = exponent_integrand(cs.theta, cs.theta_dot, params);
        return std::array<double, 4>{c.s_part.real(), c.s_part.imag(), c.w_part.real(), c.w_part.imag()};
    };

    std::array<double, 4> total{};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto r = adaptive_simpson<4>(integrand, cuts[i], cuts[i + 1], quad, record_nodes);
        if (!r.converged) {
            std::ostringstream msg;
            msg << "exponent quadrature did not converge on [" << cuts[i] << ", " << cuts[i + 1]
                << "] s; achieved error estimates " << r.error_estimate[0] << ", " << r.error_estimate[1]
                << ", " << r.error_estimate[2] << ", " << r.error_estimate[3];
            fail(ErrorCategory::numerics, msg.str());
        }
        for (std::size_t c = 0; c < 4; ++c) {
            total[c] += r.value[c];
            out.error_estimate = std::max(out.error_estimate, r.error_estimate[c]);
        }
        out.evaluations += r.evaluations;
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    }
    out.I_s = {total[0], total[1]};
    out.I_w = {total[2], total[3]};
    if (record_nodes) {
        std::sort(out.nodes.begin(), out.nodes.end());
        out.nodes.erase(std::unique(out.nodes.begin(), out.nodes.end()), out.nodes.end());
    }
    return out;
}

SpectralState apply_evolution(const SpectralState& state, cplx I_s, cplx I_w, double overflow_guard_log)
{
    SpectralState next = state;
    next.accumulated_s += I_s;
    next.accumulated_w += I_w;

    double max_log_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < next.modes.size(); ++m) {
        const double k = next.k[m];
        const cplx exponent = -I_s - cplx(0.0, k) * I_w;
        next.modes[m] *= std::exp(exponent);
        const double total_log_gain = -next.accumulated_s.real() + k * next.accumulated_w.imag();
        max_log_gain = std::max(max_log_gain, total_log_gain);
    }
    next.max_log_gain = max_log_gain;
    if (max_log_gain > overflow_guard_log) {
        std::ostringstream msg;
        msg << "amplification overflow: max modal gain exp(" << max_log_gain << ") exceeds exp("
            << overflow_guard_log << "); the scenario is too far off resonance for this grid";
        fail(ErrorCategory::numerics, msg.str());
    }
    return next;
}

Reconstruction reconstruct(const FieldGrid& psi, const ControlState& control, const MediumParams& params)
{
    const cplx ratio = bright_ratio(control.theta, params);
    FieldGrid phi = ratio * psi;
    FieldAtomPair fa = from_polaritons(psi, phi, control.theta, params.N);
    return {std::move(phi), std::move(fa.e), std::move(fa.sigma_bc)};
}

const Snapshot& SimulationResult::at_time(double t, double tol) const
{
    const Snapshot* best = nullptr;
    for (const auto& s : snapshots) {
        if (!best || std::abs(s.t - t) < std::abs(best->t - t)) {
            best = &s;
        }
    }
    require(best != nullptr && std::abs(best->t - t) <= std::max(tol, 1e-9 * std::abs(t)),
            ErrorCategory::invalid_input, "no snapshot at the requested time");
    return *best;
}

std::vector<double> snapshot_times(double horizon, double snapshot_dt)
{
    require(std::isfinite(horizon) && horizon > 0.0, ErrorCategory::invalid_input, "horizon must be > 0");
    require(std::isfinite(snapshot_dt) && snapshot_dt > 0.0, ErrorCategory::invalid_input,
            "snapshot_dt must be > 0");
    const double steps = horizon / snapshot_dt;
    const double rounded = std::round(steps);
    require(rounded >= 1.0 && std::abs(steps - rounded) <= 1e-9 * rounded, ErrorCategory::invalid_input,
            "snapshot_dt must divide the horizon");
    const auto n = static_cast<std::size_t>(rounded);
    std::vector<double> times(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        times[j] = horizon * static_cast<double>(j) / static_cast<double>(n);
    }
    return times;
}

FieldGrid sample_pulse(const GridSpec& grid, const PulseSpec& pulse)
{
    FieldGrid f(grid);
    for (std::size_t j = 0; j < grid.n_points; ++j) {
        f.values[j] = pulse.value_at(grid.z(j));
    }
    return f;
}

namespace {

void check_edges(const FieldGrid& psi, double t, double tolerance)
{
    const double peak = psi.max_abs();
    if (peak == 0.0) {
        return;
    }
    const std::size_t n = psi.size();
    const double edge = std::max({std::abs(psi.values[0]), std::abs(psi.values[1]),
                                  std::abs(psi.values[n - 2]), std::abs(psi.values[n - 1])});
    if (edge > tolerance * peak) {
        std::ostringstream msg;
        msg << "domain overflow at t = " << t << " s: |Psi| within 2 dz of the domain edge is "
            << edge / peak << " of the peak (limit " << tolerance
            << "); widen the grid or shorten the horizon";
        fail(ErrorCategory::numerics, msg.str());
    }
}

Snapshot make_snapshot(double t, const FieldGrid& psi, const ControlSchedule& schedule,
                       const MediumParams& params)
{
    Snapshot s;
    s.t = t;
    s.control = eval_schedule(schedule, params, t);
    s.psi = psi;
    Reconstruction r = reconstruct(psi, s.control, params);
    s.phi = std::move(r.phi);
    s.e = std::move(r.e);
    s.sigma_bc = std::move(r.sigma_bc);
    return s;
}

} // namespace

SimulationResult evolve(const MediumParams& params, const ControlSchedule& schedule,
                        const FieldGrid& initial_psi, const std::vector<double>& times,
                        const SimulationOptions& options)
{
    params.validate();
    initial_psi.grid.validate();
    require(!times.empty(), ErrorCategory::invalid_input, "evolve needs at least one time");
    require(initial_psi.all_finite(), ErrorCategory::invalid_input, "initial field is not finite");
    for (std::size_t j = 1; j < times.size(); ++j) {
        require(times[j] > times[j - 1], ErrorCategory::invalid_input,
                "snapshot times must be strictly increasing");
    }

    SimulationResult result;
    result.params = params;
    result.grid = initial_psi.grid;

    check_edges(initial_psi, times.front(), options.edge_tolerance);
    SpectralState state = forward_transform(initial_psi);
    result.snapshots.push_back(make_snapshot(times.front(), initial_psi, schedule, params));

    auto record = [&](double t) {
        const ControlState cs = eval_schedule(schedule, params, t);
        CoefficientSample c = exponent_integrand(cs.theta, cs.theta_dot, params);
        c.t = t;
        result.coefficient_trace.push_back(c);
    };

    for (std::size_t j = 1; j < times.size(); ++j) {
        const ExponentIntegral I =
            accumulate_exponent(params, schedule, times[j - 1], times[j], options.quad, options.record_trace);
        if (options.record_trace) {
            for (double t : I.nodes) {
                if (result.coefficient_trace.empty() || t > result.coefficient_trace.back().t) {
                    record(t);
                }
            }
        }
        state = apply_evolution(state, I.I_s, I.I_w, options.overflow_guard_log);
        result.max_log_gain = std::max(result.max_log_gain, state.max_log_gain);
        FieldGrid psi = inverse_transform(state);
        if (!psi.all_finite()) {
            std::ostringstream msg;
            msg << "non-finite polariton field at t = " << times[j] << " s";
            fail(ErrorCategory::numerics, msg.str());
        }
        check_edges(psi, times[j], options.edge_tolerance);
        result.snapshots.push_back(make_snapshot(times[j], psi, schedule, params));
    }
    return result;
}

SimulationResult simulate(const MediumParams& params, const GridSpec& grid, const PulseSpec& pulse,
                          const ControlSchedule& schedule, double horizon, double snapshot_dt,
                          const SimulationOptions& options)
{
    params.validate();
    grid.validate();
    pulse.validate();
    require(grid.length() >= 4.0 * pulse.pulse_length(), ErrorCategory::invalid_input,
            "grid must span at least 4x the pulse length (anti-wraparound margin)");

    ValidityReport report = check_regime(params, pulse, schedule, schedule.turn_time());
    std::vector<std::string> warnings;
    if (!report.pass()) {
        std::string failed;
        for (const auto& f : report.failures()) {
            failed += (failed.empty() ? "" : ", ") + f;
        }
        if (!options.force) {
            fail(ErrorCategory::physics_validity, "regime check failed: " + failed + " (use force to override)");
        }
        warnings.push_back("regime check failed but run was forced: " + failed);
    }
    for (const auto& note : report.notes) {
        warnings.push_back(note);
    }

    SimulationResult result =
        evolve(params, schedule, sample_pulse(grid, pulse), snapshot_times(horizon, snapshot_dt), options);
    result.validity = std::move(report);
    result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
    return result;
}

} // namespace eitmem
