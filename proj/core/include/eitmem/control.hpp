#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "eitmem/params.hpp"

namespace eitmem {

/// Mixing angle, its rate and the control Rabi frequency at one instant.
struct ControlState
{
    double theta = 0.0;     // rad, in (0, pi/2)
    double theta_dot = 0.0; // rad/s
    double omega = 0.0;     // rad/s
};

/// Constant control field of Rabi frequency omega.
struct ConstantControl
{
    double omega = 5e6;

    bool operator==(const ConstantControl&) const = default;
};

/**
 * Switch-off/switch-on profile
 *
 *   cot theta = scale * {1 - 0.5 tanh(k (t - t1)) + 0.5 tanh(k (t - t2))} + floor
 *
 * The floor keeps the control field finite during storage.
 */
struct TanhControl
{
    double scale = 5e-4;
    double floor = 1e-5;
    double steepness = 1e5; // 1/s
    double t1 = 30e-6;
    double t2 = 125e-6;

    bool operator==(const TanhControl&) const = default;
};

/// Sampled theta(t), interpolated with a monotone cubic.
struct TabulatedControl
{
    std::vector<double> t;
    std::vector<double> theta;
    double floor = 1e-5; // minimum admissible cot(theta)

    bool operator==(const TabulatedControl&) const = default;
};

/**
 * Immutable control-field profile. Construction validates the profile:
 * cot(theta) never drops below a positive floor, so the field is never
 * switched fully off.
 */
class ControlSchedule
{
public:
    using Profile = std::variant<ConstantControl, TanhControl, TabulatedControl>;

    ControlSchedule() : ControlSchedule(TanhControl{}) {}
    explicit ControlSchedule(Profile profile);

    static ControlSchedule constant(double omega) { return ControlSchedule(ConstantControl{omega}); }
    static ControlSchedule tanh_profile(TanhControl p) { return ControlSchedule(p); }
    static ControlSchedule tabulated(std::vector<double> t, std::vector<double> theta,
                                     double floor = 1e-5);

    const Profile& profile() const { return m_profile; }
    bool is_constant() const { return std::holds_alternative<ConstantControl>(m_profile); }

    /// Characteristic switching time T_r; +inf for a constant field.
    double turn_time() const;

    /// Times where theta changes quickly; quadrature splits intervals there.
    std::vector<double> breakpoints() const;

    /// Time span worth scanning for extrema of theta.
    std::pair<double, double> nominal_span() const;

    ControlState evaluate(const MediumParams& params, double t) const;

    bool operator==(const ControlSchedule& other) const { return m_profile == other.m_profile; }

private:
    ControlState evaluate_tabulated(const TabulatedControl& tab, const MediumParams& params,
                                    double t) const;

    Profile m_profile;
    // monotone cubic slopes for the tabulated profile
    std::vector<double> m_slopes;
};

/// theta = arctan(g sqrt(N) / omega). omega must be positive.
double theta_from_omega(double omega, double g, double N);
double omega_from_theta(double theta, double g, double N);

ControlState eval_schedule(const ControlSchedule& schedule, const MediumParams& params, double t);

} // namespace eitmem
