#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eitmem/coefficients.hpp"
#include "eitmem/control.hpp"
#include "eitmem/grid.hpp"
#include "eitmem/params.hpp"
#include "eitmem/quadrature.hpp"
#include "eitmem/regime.hpp"

namespace eitmem {

/**
 * Fourier representation of the polariton on the periodic grid. Modes are in
 * natural DFT order and k[m] is the matching wavenumber. The accumulators
 * hold the integrated exponent applied since the state was created.
 */
struct SpectralState
{
    GridSpec grid;
    std::vector<double> k;
    std::vector<cplx> modes;
    cplx accumulated_s{0.0, 0.0};
    cplx accumulated_w{0.0, 0.0}; // m
    double max_log_gain = 0.0;    // max over k of log|total modal factor|
};

SpectralState forward_transform(const FieldGrid& f);
FieldGrid inverse_transform(const SpectralState& state);

struct ExponentIntegral
{
    cplx I_s{0.0, 0.0};
    cplx I_w{0.0, 0.0}; // m; Re is the pulse displacement
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::vector<double> nodes;
};

/// Integrates s and w over [t0, t1] by adaptive Simpson, splitting at the
/// schedule's switching times. Throws numerics if the tolerance is missed.
ExponentIntegral accumulate_exponent(const MediumParams& params, const ControlSchedule& schedule,
                                     double t0, double t1, const QuadratureSpec& quad = {},
                                     bool record_nodes = false);

/// Default cap on log of the modal gain, beyond which a run is rejected.
inline constexpr double kDefaultOverflowGuardLog = 50.0;

/// modes_m <- modes_m exp(-I_s - i k_m I_w)
SpectralState apply_evolution(const SpectralState& state, cplx I_s, cplx I_w,
                              double overflow_guard_log = kDefaultOverflowGuardLog);

struct Reconstruction
{
    FieldGrid phi;
    FieldGrid e;
    FieldGrid sigma_bc;
};

/// Bright state, probe field and ground coherence slaved to Psi at the given
/// control state (zeroth order in the adiabatic parameter).
Reconstruction reconstruct(const FieldGrid& psi, const ControlState& control, const MediumParams& params);

struct Snapshot
{
    double t = 0.0;
    ControlState control;
    FieldGrid psi;
    FieldGrid phi;
    FieldGrid e;
    FieldGrid sigma_bc;
};

struct SimulationOptions
{
    bool force = false;
    double overflow_guard_log = kDefaultOverflowGuardLog;
    // |Psi| within 2 dz of either edge must stay below edge_tolerance * peak
    double edge_tolerance = 1e-6;
    QuadratureSpec quad;
    bool record_trace = true;
};

struct SimulationResult
{
    MediumParams params;
    GridSpec grid;
    std::vector<Snapshot> snapshots;
    std::vector<CoefficientSample> coefficient_trace;
    std::optional<ValidityReport> validity;
    std::vector<std::string> warnings;
    double max_log_gain = 0.0;

    const Snapshot& at_time(double t, double tol = 1e-12) const;
};

/// Uniform snapshot times 0, dt, ..., horizon. horizon must be a multiple of dt.
std::vector<double> snapshot_times(double horizon, double snapshot_dt);

FieldGrid sample_pulse(const GridSpec& grid, const PulseSpec& pulse);

/// Evolves an arbitrary initial polariton field. No regime gate.
SimulationResult evolve(const MediumParams& params, const ControlSchedule& schedule,
                        const FieldGrid& initial_psi, const std::vector<double>& times,
                        const SimulationOptions& options = {});

/// Full run from a Gaussian pulse, gated by check_regime unless options.force.
SimulationResult simulate(const MediumParams& params, const GridSpec& grid, const PulseSpec& pulse,
                          const ControlSchedule& schedule, double horizon, double snapshot_dt,
                          const SimulationOptions& options = {});

} // namespace eitmem
