#pragma once

#include <string>
#include <vector>

#include "eitmem/control.hpp"
#include "eitmem/grid.hpp"
#include "eitmem/params.hpp"

namespace eitmem {

/**
 * Probe field and the two optical/ground coherences of the reduced
 * Maxwell-Bloch system, sampled on one grid:
 *
 *   (d/dt + c d/dz) E = i g N sigma_ba
 *   d/dt sigma_ba = -(i(D+Dp) + gba) sigma_ba + i g E + i Omega sigma_bc
 *   d/dt sigma_bc = -(i Dp + gbc) sigma_bc + i conj(Omega) sigma_ba
 */
struct OracleState
{
    FieldGrid e_field;
    FieldGrid sigma_ba;
    FieldGrid sigma_bc;
    double t = 0.0;

    void validate() const;
};

enum class OracleScheme { splitting_spectral_advection, explicit_upwind };
enum class StiffHandling { exact_exponential, implicit };

std::string to_string(OracleScheme s);
std::string to_string(StiffHandling s);
OracleScheme parse_oracle_scheme(const std::string& s);
StiffHandling parse_stiff_handling(const std::string& s);

struct OracleConfig
{
    double dt = 1e-10; // s, upper bound; steps are shortened to land on snapshots
    OracleScheme scheme = OracleScheme::splitting_spectral_advection;
    StiffHandling stiff_handling = StiffHandling::exact_exponential;
    double c_scale = 1.0; // effective light speed is params.c * c_scale
    double snapshot_dt = 0.0; // s; 0 keeps only the initial and final states

    /// Checks dt and c_scale, and the CFL bound dt <= dz / (c c_scale) for
    /// the upwind scheme.
    void validate(const MediumParams& params, const GridSpec& grid) const;
};

/// All-zero state on the grid.
OracleState zero_oracle_state(const GridSpec& grid, double t = 0.0);

/**
 * Integrates the reduced system from initial.t to initial.t + horizon. The
 * returned list starts with the initial state and holds one state per
 * snapshot_dt. Throws numerics on the first non-finite step.
 */
std::vector<OracleState> integrate_reduced(const MediumParams& params, const GridSpec& grid,
                                           const OracleState& initial, const ControlSchedule& schedule,
                                           double horizon, const OracleConfig& cfg);

} // namespace eitmem
