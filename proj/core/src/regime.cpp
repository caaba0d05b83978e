#include "eitmem/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eitmem/coefficients.hpp"

namespace eitmem {

RatioCheck much_greater(double ratio)
{
    return {ratio, ratio >= kMuchGreaterPass, ratio >= kMuchGreaterStrong};
}

bool ValidityReport::pass() const
{
    return failures().empty();
}

std::vector<std::string> ValidityReport::failures() const
{
    std::vector<std::string> out;
    if (!high_density.pass) out.emplace_back("high_density");
    if (!adiabatic_length.pass) out.emplace_back("adiabatic_length");
    if (!adiabatic_time.pass) out.emplace_back("adiabatic_time");
    if (!adiabatic_parameter_pass) out.emplace_back("adiabatic_parameter");
    if (!low_intensity_pass) out.emplace_back("low_intensity");
    return out;
}

double high_density_ratio(const MediumParams& params)
{
    const double denom = std::abs(params.optical_rate() * params.ground_rate());
    if (denom == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return params.g2N() / denom;
}

ValidityReport check_regime(const MediumParams& params, const PulseSpec& pulse,
                            const ControlSchedule& schedule, double turn_time)
{
    ValidityReport r;
    const double inf = std::numeric_limits<double>::infinity();

    r.high_density = much_greater(high_density_ratio(params));

    const double absorption_length = std::sqrt(params.gamma_ba * params.c * params.L / params.g2N());
    r.adiabatic_length = much_greater(pulse.pulse_length() / absorption_length);

    const auto [t_begin, t_end] = schedule.nominal_span();
    const ControlState start = eval_schedule(schedule, params, t_begin);
    const double v_g0 = exponent_integrand(start.theta, start.theta_dot, params).v_g;
    const double rotation_scale = params.gamma_ba / params.g2N() * v_g0 / params.c;
    r.adiabatic_time = much_greater(rotation_scale > 0.0 ? turn_time / rotation_scale : inf);

    const double pulse_duration = v_g0 > 0.0 ? pulse.pulse_length() / v_g0 : inf;
    const double characteristic = std::min(pulse_duration, turn_time);
    r.adiabatic_parameter = std::isfinite(characteristic) ? 1.0 / (params.g_sqrtN() * characteristic) : 0.0;
    r.adiabatic_parameter_pass = r.adiabatic_parameter <= kSmallParameterLimit;

    // Probe Rabi scale g |E| with E = (cos theta + sin theta Phi/Psi) Psi,
    // scanned over the schedule's active span.
    constexpr int samples = 2001;
    double max_probe = 0.0;
    double min_control = inf;
    for (int i = 0; i < samples; ++i) {
        const double t = t_begin + (t_end - t_begin) * i / (samples - 1.0);
        const ControlState cs = eval_schedule(schedule, params, t);
        const cplx to_field = std::cos(cs.theta) + std::sin(cs.theta) * bright_ratio(cs.theta, params);
        max_probe = std::max(max_probe, params.g * std::abs(pulse.amplitude) * std::abs(to_field));
        min_control = std::min(min_control, cs.omega);
    }
    r.low_intensity_ratio = min_control > 0.0 ? max_probe / min_control : inf;
    r.low_intensity_pass = r.low_intensity_ratio <= kSmallParameterLimit;

    if (params.gamma_a || params.gamma_c) {
        r.notes.emplace_back("gamma_a/gamma_c supplied but ignored: the reduced two-coherence "
                             "model never uses population decay rates");
    }
    return r;
}

} // namespace eitmem
