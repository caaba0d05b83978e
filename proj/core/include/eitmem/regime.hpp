#pragma once

#include <string>
#include <vector>

#include "eitmem/control.hpp"
#include "eitmem/params.hpp"

namespace eitmem {

/// A "much greater than" condition passes at ratio >= 10, strongly at >= 100.
inline constexpr double kMuchGreaterPass = 10.0;
inline constexpr double kMuchGreaterStrong = 100.0;
/// Adiabatic parameter and probe/control ratio must stay at or below this.
inline constexpr double kSmallParameterLimit = 0.1;

struct RatioCheck
{
    double ratio = 0.0;
    bool pass = false;
    bool strong = false;
};

struct ValidityReport
{
    RatioCheck high_density;     // g^2N / |(i(D+Dp)+gba)(iDp+gbc)|
    RatioCheck adiabatic_length; // L_p / sqrt(gba c L / g^2N)
    RatioCheck adiabatic_time;   // T_r / (gba v_g0 / (g^2N c))
    double adiabatic_parameter = 0.0; // 1 / (g sqrt(N) T)
    bool adiabatic_parameter_pass = false;
    double low_intensity_ratio = 0.0; // max probe Rabi / min control Rabi
    bool low_intensity_pass = false;
    std::vector<std::string> notes;

    bool pass() const;
    /// Names of the failed checks, in a fixed order.
    std::vector<std::string> failures() const;
};

RatioCheck much_greater(double ratio);

double high_density_ratio(const MediumParams& params);

/**
 * Regime checks for the adiabatic, low-intensity, high-density model. Never
 * throws on physics failure; the report carries the verdicts.
 */
ValidityReport check_regime(const MediumParams& params, const PulseSpec& pulse,
                            const ControlSchedule& schedule, double turn_time);

} // namespace eitmem
