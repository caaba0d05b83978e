#pragma once

#include <string>
#include <vector>

#include "eitmem/oracle.hpp"
#include "eitmem/solver.hpp"

namespace eitmem {

enum class Observable { e, sigma_bc };

std::string to_string(Observable o);

struct SnapshotDiscrepancy
{
    double t = 0.0;
    double linf_rel = 0.0; // max|diff| / max|oracle|
    double l2_rel = 0.0;   // ||diff|| / ||oracle||
};

struct DiscrepancyReport
{
    Observable observable = Observable::e;
    std::vector<SnapshotDiscrepancy> snapshots;
    double max_linf_rel = 0.0;
    double max_l2_rel = 0.0;
    double adiabatic_length_ratio = 0.0;
    double adiabatic_time_ratio = 0.0;
    double high_density_ratio = 0.0;
    double adiabatic_parameter = 0.0;
    /// Failed regime checks, if any; names the likely cause of a large error.
    std::vector<std::string> attributed_to;
};

/**
 * Oracle state at time t matching the adiabatic solution built from psi: the
 * dark-state field and ground coherence with the bright admixture, and the
 * optical coherence that sustains them.
 */
OracleState seed_oracle_state(const MediumParams& params, const ControlSchedule& schedule,
                              const FieldGrid& psi, double t);

/**
 * Compares oracle snapshots against adiabatic snapshots at equal times.
 * oracle_params with c_scale must describe the same medium as the adiabatic
 * run (whose c is already the effective one). Throws invalid_input on any
 * mismatch of grid, medium or snapshot times.
 */
DiscrepancyReport compare_to_adiabatic(const std::vector<OracleState>& oracle_run,
                                       const MediumParams& oracle_params, double c_scale,
                                       const SimulationResult& adiabatic_run,
                                       Observable observable = Observable::e);

} // namespace eitmem
