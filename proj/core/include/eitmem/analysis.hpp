#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eitmem/control.hpp"
#include "eitmem/grid.hpp"
#include "eitmem/params.hpp"
#include "eitmem/solver.hpp"

namespace eitmem {

enum class TrackedField { psi, e, sigma_bc };

std::string to_string(TrackedField f);
TrackedField parse_tracked_field(const std::string& s);

/// Peak position, peak height, rms width and imaginary share per snapshot.
struct PulseTrack
{
    std::vector<double> times;
    std::vector<double> peak_z;
    std::vector<double> peak_amp;
    std::vector<double> width;
    std::vector<double> imag_fraction; // max|Im| / max|f|
};

/// Fields below this peak magnitude cannot be tracked.
inline constexpr double kTrackFloor = 1e-12;

struct PeakEstimate
{
    double z = 0.0;
    double amplitude = 0.0;
};

/// Peak of |f| refined by a parabola through log|f| at the three samples
/// around the grid maximum (exact for a Gaussian).
PeakEstimate locate_peak(const FieldGrid& f);

PulseTrack track_pulse(const SimulationResult& result, TrackedField field = TrackedField::psi);

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t samples = 0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Least-squares peak velocity over the snapshots with t in [t0, t1].
LinearFit fit_velocity(const PulseTrack& track, double t0, double t1);

struct DecayFit
{
    double rate = 0.0; // 1/s
    double residual_rms = 0.0;
    std::size_t samples = 0;
    bool poor_fit = false;
    std::string warning;
};

/// Minus the slope of ln(peak_amp) over t in [t0, t1]. Needs >= 3 samples.
DecayFit fit_decay(const PulseTrack& track, double t0, double t1, double residual_limit = 1e-3);

struct TimeWindow
{
    double t0 = 0.0;
    double t1 = 0.0;
    bool control_on = true;
};

/// Stretches of [0, horizon] where the control is steadily on or off, with
/// guard seconds removed around each switch. Empty windows are dropped.
std::vector<TimeWindow> steady_windows(const ControlSchedule& schedule, const MediumParams& params,
                                       double horizon, double guard);

enum class PredictMode { simple, exact };

struct PredictedOutput
{
    FieldGrid field;
    double displacement = 0.0; // m
    double amplitude_factor = 1.0;
};

/**
 * Output pulse after a storage time T0 starting at t_in: the input shifted by
 * the integrated group velocity and damped by exp(-gbc T0) (simple) or by
 * the integrated slow-light decay rate including the switching term (exact).
 */
PredictedOutput predict_output(const MediumParams& params, const ControlSchedule& schedule,
                               const FieldGrid& input, double t_in, double T0,
                               PredictMode mode = PredictMode::simple);

inline constexpr double kDistortionThreshold = 0.1;

struct DistortionReport
{
    double aligned_l2 = 0.0;
    double shift = 0.0; // m, output ~ a * input(z - shift)
    cplx scale{0.0, 0.0};
    double high_k_fraction = 0.0;
    double input_high_k_fraction = 0.0;
    double phase_shift = 0.0;
    double imag_fraction = 0.0;
    bool distorted = false;

    const char* verdict() const { return distorted ? "distorted" : "clean"; }
};

/**
 * Best alignment of output with a shifted, complex-scaled copy of input.
 * aligned_l2 is the residual norm relative to the output norm; high_k_fraction
 * is the output energy beyond 3 rms input bandwidths from the input's mean k.
 */
DistortionReport measure_distortion(const FieldGrid& input, const FieldGrid& output,
                                    double threshold = kDistortionThreshold);

/// Prefactor of the undistorted-output detuning and bandwidth limits.
inline constexpr double kDistortionBudget = 0.01;

struct DesignLimits
{
    double delta_p_max = 0.0;       // rad/s
    double delta_max = 0.0;         // rad/s
    double bw_limit = 0.0;          // rad/s, each laser
    double bw_mismatch_limit = 0.0; // rad/s, between the lasers
    double t_transit_max = 0.0;     // s
    std::vector<std::string> notes;
};

DesignLimits design_limits(const MediumParams& params, double L_p, double T0);

struct LowIntensitySample
{
    double t = 0.0;
    double probe_rabi = 0.0;   // g max|E|
    double control_rabi = 0.0; // Omega(t)
    double ratio = 0.0;
};

struct LowIntensityReport
{
    std::vector<LowIntensitySample> samples;
    double max_ratio = 0.0;
    bool pass = true;
    std::vector<double> flagged_times;
};

LowIntensityReport check_low_intensity(const SimulationResult& result, const MediumParams& params,
                                       const ControlSchedule& schedule, double limit = 0.1);

} // namespace eitmem
