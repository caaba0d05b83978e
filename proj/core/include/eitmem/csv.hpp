#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "eitmem/coefficients.hpp"
#include "eitmem/oracle.hpp"
#include "eitmem/solver.hpp"

namespace eitmem {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_number(double x);

/// t,z then re/im/abs of psi, phi, e and sigma_bc; one row per grid point per snapshot.
void write_snapshots_csv(std::ostream& os, const SimulationResult& result);

/// t,alpha1,alpha2,beta,v_g
void write_trace_csv(std::ostream& os, const std::vector<CoefficientSample>& trace);

/// Oracle snapshots with a "# scheme=... dt=..." first line; Psi and Phi are
/// formed from E and sigma_bc at each snapshot's mixing angle.
void write_oracle_csv(std::ostream& os, const std::vector<OracleState>& states, const OracleConfig& cfg,
                      const MediumParams& params, const ControlSchedule& schedule);

} // namespace eitmem
