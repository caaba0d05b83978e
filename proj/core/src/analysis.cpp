#include "eitmem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "eitmem/coefficients.hpp"
#include "eitmem/error.hpp"
#include "eitmem/fft.hpp"
#include "eitmem/quadrature.hpp"

namespace eitmem {

std::string to_string(TrackedField f)
{
    switch (f) {
    case TrackedField::psi:
        return "psi";
    case TrackedField::e:
        return "e";
    case TrackedField::sigma_bc:
        return "sigma_bc";
    }
    return "psi";
}

TrackedField parse_tracked_field(const std::string& s)
{
    if (s == "psi" || s == "Psi") {
        return TrackedField::psi;
    }
    if (s == "e" || s == "E") {
        return TrackedField::e;
    }
    if (s == "sigma_bc") {
        return TrackedField::sigma_bc;
    }
    fail(ErrorCategory::config, "unknown field '" + s + "' (expected psi, e or sigma_bc)");
}

PeakEstimate locate_peak(const FieldGrid& f)
{
    const std::size_t n = f.size();
    const std::size_t j = f.argmax_abs();
    const double a0 = std::abs(f.values[j]);
    require(a0 > kTrackFloor, ErrorCategory::numerics, "field is below the tracking floor everywhere");
    const double am = std::abs(f.values[(j + n - 1) % n]);
    const double ap = std::abs(f.values[(j + 1) % n]);
    PeakEstimate p{f.grid.z(j), a0};
    if (am <= 0.0 || ap <= 0.0) {
        return p;
    }
    const double lm = std::log(am);
    const double l0 = std::log(a0);
    const double lp = std::log(ap);
    const double curv = lm - 2.0 * l0 + lp;
    if (curv >= 0.0) {
        return p;
    }
    const double off = 0.5 * (lm - lp) / curv; // in cells, |off| <= 0.5
    p.z += off * f.grid.dz();
    p.amplitude = std::exp(l0 - 0.25 * (lm - lp) * off);
    return p;
}

namespace {

const FieldGrid& pick(const Snapshot& s, TrackedField field)
{
    switch (field) {
    case TrackedField::e:
        return s.e;
    case TrackedField::sigma_bc:
        return s.sigma_bc;
    case TrackedField::psi:
        break;
    }
    return s.psi;
}

double rms_width(const FieldGrid& f)
{
    double w0 = 0.0;
    double w1 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double p = std::norm(f.values[j]);
        w0 += p;
        w1 += p * f.grid.z(j);
    }
    const double mean = w1 / w0;
    double w2 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double d = f.grid.z(j) - mean;
        w2 += std::norm(f.values[j]) * d * d;
    }
    return std::sqrt(w2 / w0);
}

} // namespace

PulseTrack track_pulse(const SimulationResult& result, TrackedField field)
{
    require(result.snapshots.size() >= 2, ErrorCategory::invalid_input, "track_pulse needs >= 2 snapshots");
    PulseTrack track;
    for (const auto& s : result.snapshots) {
        const FieldGrid& f = pick(s, field);
        const PeakEstimate peak = locate_peak(f);
        track.times.push_back(s.t);
        track.peak_z.push_back(peak.z);
        track.peak_amp.push_back(peak.amplitude);
        track.width.push_back(rms_width(f));
        track.imag_fraction.push_back(f.max_abs_imag() / f.max_abs());
    }
    return track;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    require(x.size() == y.size() && x.size() >= 2, ErrorCategory::invalid_input,
            "line fit needs >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorCategory::invalid_input, "line fit needs distinct abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    fit.samples = x.size();
    return fit;
}

namespace {

std::pair<std::vector<double>, std::vector<double>> window(const std::vector<double>& t,
                                                           const std::vector<double>& y, double t0,
                                                           double t1)
{
    std::vector<double> xs;
    std::vector<double> ys;
    const double slack = 1e-12 * std::max(std::abs(t0), std::abs(t1));
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t0 - slack && t[i] <= t1 + slack) {
            xs.push_back(t[i]);
            ys.push_back(y[i]);
        }
    }
    return {xs, ys};
}

} // namespace

LinearFit fit_velocity(const PulseTrack& track, double t0, double t1)
{
    const auto [xs, ys] = window(track.times, track.peak_z, t0, t1);
    return fit_line(xs, ys);
}

DecayFit fit_decay(const PulseTrack& track, double t0, double t1, double residual_limit)
{
    std::vector<double> log_amp;
    for (double a : track.peak_amp) {
        log_amp.push_back(std::log(a));
    }
    const auto [xs, ys] = window(track.times, log_amp, t0, t1);
    require(xs.size() >= 3, ErrorCategory::invalid_input, "fit_decay needs >= 3 samples in the window");
    const LinearFit line = fit_line(xs, ys);
    DecayFit fit;
    fit.rate = -line.slope;
    fit.residual_rms = line.residual_rms;
    fit.samples = line.samples;
    if (line.residual_rms > residual_limit) {
        fit.poor_fit = true;
        std::ostringstream msg;
        msg << "poor exponential fit on [" << t0 << ", " << t1 << "] s: rms log residual "
            << line.residual_rms;
        fit.warning = msg.str();
    }
    return fit;
}

std::vector<TimeWindow> steady_windows(const ControlSchedule& schedule, const MediumParams& params,
                                       double horizon, double guard)
{
    require(horizon > 0.0 && guard >= 0.0, ErrorCategory::invalid_input, "bad window arguments");
    std::vector<double> cuts{0.0};
    for (double b : schedule.breakpoints()) {
        if (b > 0.0 && b < horizon) {
            cuts.push_back(b);
        }
    }
    cuts.push_back(horizon);

    std::vector<double> cot;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        cot.push_back(1.0 / std::tan(eval_schedule(schedule, params, 0.5 * (cuts[i] + cuts[i + 1])).theta));
    }
    const double top = *std::max_element(cot.begin(), cot.end());

    std::vector<TimeWindow> merged;
    for (std::size_t i = 0; i < cot.size(); ++i) {
        const bool on = cot[i] > 0.5 * top;
        if (!merged.empty() && merged.back().control_on == on) {
            merged.back().t1 = cuts[i + 1];
        } else {
            merged.push_back({cuts[i], cuts[i + 1], on});
        }
    }
    std::vector<TimeWindow> out;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        TimeWindow w = merged[i];
        if (i > 0) {
            w.t0 += guard;
        }
        if (i + 1 < merged.size()) {
            w.t1 -= guard;
        }
        if (w.t1 > w.t0) {
            out.push_back(w);
        }
    }
    return out;
}

PredictedOutput predict_output(const MediumParams& params, const ControlSchedule& schedule,
                               const FieldGrid& input, double t_in, double T0, PredictMode mode)
{
    params.validate();
    require(T0 >= 0.0, ErrorCategory::invalid_input, "T0 must be >= 0");
    if (!params.on_resonance()) {
        fail(ErrorCategory::invalid_input,
             "predict_output covers the resonant case only; the detuned output needs the full solver");
    }
    PredictedOutput out;
    out.field = input;
    if (T0 == 0.0) {
        return out;
    }

    const std::function<std::array<double, 2>(double)> f = [&](double t) {
        const ControlState cs = eval_schedule(schedule, params, t);
        const double vg = exponent_integrand(cs.theta, cs.theta_dot, params).v_g;
        const double a1 = mode == PredictMode::exact ? alpha1_slow_light(cs.theta, cs.theta_dot, params)
                                                     : params.gamma_bc;
        return std::array<double, 2>{vg, a1};
    };
    std::vector<double> cuts{t_in};
    for (double b : schedule.breakpoints()) {
        if (b > t_in && b < t_in + T0) {
            cuts.push_back(b);
        }
    }
    cuts.push_back(t_in + T0);
    double disp = 0.0;
    double damping = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto r = adaptive_simpson<2>(f, cuts[i], cuts[i + 1], QuadratureSpec{});
        require(r.converged, ErrorCategory::numerics, "predict_output quadrature did not converge");
        disp += r.value[0];
        damping += r.value[1];
    }
    out.displacement = disp;
    out.amplitude_factor = std::exp(-damping);

    std::vector<cplx> modes = fft::forward(input.values);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        modes[m] *= out.amplitude_factor * std::exp(cplx(0.0, -input.grid.wavenumber(m) * disp));
    }
    out.field = FieldGrid(input.grid, fft::inverse(modes));
    return out;
}

namespace {

// sum_m Out_m conj(In_m) exp(i k_m s); proportional to <input(. - s), output>
cplx correlation_at(const std::vector<cplx>& cross, const std::vector<double>& k, double s)
{
    cplx acc(0.0, 0.0);
    for (std::size_t m = 0; m < cross.size(); ++m) {
        acc += cross[m] * std::exp(cplx(0.0, k[m] * s));
    }
    return acc;
}

double band_fraction(const std::vector<cplx>& spec, const std::vector<double>& k, double k_mean, double cut)
{
    double all = 0.0;
    double high = 0.0;
    for (std::size_t m = 0; m < spec.size(); ++m) {
        const double p = std::norm(spec[m]);
        all += p;
        if (std::abs(k[m] - k_mean) > cut) {
            high += p;
        }
    }
    return all > 0.0 ? high / all : 0.0;
}

} // namespace

DistortionReport measure_distortion(const FieldGrid& input, const FieldGrid& output, double threshold)
{
    require(input.grid == output.grid && input.size() == output.size(), ErrorCategory::invalid_input,
            "measure_distortion needs both fields on one grid");
    require(input.max_abs() > 0.0, ErrorCategory::invalid_input, "measure_distortion: input is zero");
    require(output.max_abs() > 0.0, ErrorCategory::invalid_input, "measure_distortion: output is zero");

    const std::size_t n = input.size();
    const double dz = input.grid.dz();
    const std::vector<double> k = input.grid.wavenumbers();
    const std::vector<cplx> in_k = fft::forward(input.values);
    const std::vector<cplx> out_k = fft::forward(output.values);

    std::vector<cplx> cross(n);
    double in_energy = 0.0;
    double out_energy = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        cross[m] = out_k[m] * std::conj(in_k[m]);
        in_energy += std::norm(in_k[m]);
        out_energy += std::norm(out_k[m]);
    }

    // Integer lag from the circular cross-correlation, then golden-section
    // refinement of |c(s)| within one cell.
    const std::vector<cplx> lag = fft::inverse(cross);
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (std::abs(lag[j]) > std::abs(lag[best])) {
            best = j;
        }
    }
    const double s0 = (best < n / 2 ? static_cast<double>(best) : static_cast<double>(best) - n) * dz;
    double a = s0 - dz;
    double b = s0 + dz;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = std::abs(correlation_at(cross, k, x1));
    double f2 = std::abs(correlation_at(cross, k, x2));
    for (int it = 0; it < 80 && (b - a) > 1e-9 * dz; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = std::abs(correlation_at(cross, k, x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = std::abs(correlation_at(cross, k, x1));
        }
    }
    const double shift = 0.5 * (a + b);

    DistortionReport rep;
    rep.shift = shift;
    rep.scale = correlation_at(cross, k, shift) / in_energy;
    double resid = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const cplx model = rep.scale * in_k[m] * std::exp(cplx(0.0, -k[m] * shift));
        resid += std::norm(out_k[m] - model);
    }
    rep.aligned_l2 = std::sqrt(resid / out_energy);
    rep.phase_shift = std::arg(rep.scale);

    double k_mean = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        k_mean += k[m] * std::norm(in_k[m]);
    }
    k_mean /= in_energy;
    double k_var = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        k_var += (k[m] - k_mean) * (k[m] - k_mean) * std::norm(in_k[m]);
    }
    const double sigma_k = std::sqrt(k_var / in_energy);
    rep.high_k_fraction = band_fraction(out_k, k, k_mean, 3.0 * sigma_k);
    rep.input_high_k_fraction = band_fraction(in_k, k, k_mean, 3.0 * sigma_k);
    rep.imag_fraction = output.max_abs_imag() / output.max_abs();
    rep.distorted = rep.aligned_l2 > threshold;
    return rep;
}

DesignLimits design_limits(const MediumParams& params, double L_p, double T0)
{
    params.validate();
    require(std::isfinite(L_p) && L_p > 0.0, ErrorCategory::invalid_input, "L_p must be > 0");
    require(T0 > 0.0, ErrorCategory::invalid_input, "T0 must be > 0");
    const double pi = 3.14159265358979323846;
    const double base = kDistortionBudget * params.g2N() * L_p / (params.c * pi * T0);

    DesignLimits lim;
    lim.delta_p_max = base / params.gamma_ba;
    lim.bw_mismatch_limit = lim.delta_p_max;
    if (params.gamma_bc > 0.0) {
        lim.delta_max = base / params.gamma_bc;
        lim.bw_limit = lim.delta_max;
    } else {
        lim.delta_max = std::numeric_limits<double>::infinity();
        lim.bw_limit = lim.delta_max;
        lim.notes.push_back("gamma_bc = 0: one-photon detuning and laser bandwidth are unbounded here");
    }
    lim.t_transit_max = max_transit_time(params, params.L);
    lim.notes.push_back("detuning and bandwidth bounds use a 0.01 distortion budget");
    return lim;
}

LowIntensityReport check_low_intensity(const SimulationResult& result, const MediumParams& params,
                                       const ControlSchedule& schedule, double limit)
{
    LowIntensityReport rep;
    for (const auto& s : result.snapshots) {
        LowIntensitySample x;
        x.t = s.t;
        x.probe_rabi = params.g * s.e.max_abs();
        x.control_rabi = eval_schedule(schedule, params, s.t).omega;
        x.ratio = x.probe_rabi == 0.0 ? 0.0 : x.probe_rabi / x.control_rabi;
        rep.max_ratio = std::max(rep.max_ratio, x.ratio);
        if (x.ratio > limit) {
            rep.pass = false;
            rep.flagged_times.push_back(s.t);
        }
        rep.samples.push_back(x);
    }
    return rep;
}

} // namespace eitmem
