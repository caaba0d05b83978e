#pragma once

#include <optional>
#include <string>

#include "eitmem/control.hpp"
#include "eitmem/grid.hpp"
#include "eitmem/oracle.hpp"
#include "eitmem/params.hpp"

namespace eitmem::cli {

struct AnalysisSettings
{
    double L_p = 1e-3;  // m, pulse length used by the design limits
    double T0 = 53e-6;  // s, storage time used by the design limits
    double output_time = 165e-6;
    double distortion_threshold = 0.1;
    double track_dt = 1e-6;
    // Measurement windows; unset ones are derived from the control schedule.
    std::optional<double> on_window_start;
    std::optional<double> on_window_end;
    std::optional<double> off_window_start;
    std::optional<double> off_window_end;

    bool operator==(const AnalysisSettings&) const = default;
};

struct OracleSettings
{
    bool enabled = false;
    double dt = 1e-9;
    OracleScheme scheme = OracleScheme::splitting_spectral_advection;
    StiffHandling stiff_handling = StiffHandling::exact_exponential;

    bool operator==(const OracleSettings&) const = default;
};

struct OutputSettings
{
    std::string out_dir = "out";
    bool snapshots = true;
    bool trace = true;

    bool operator==(const OutputSettings&) const = default;
};

struct Scenario
{
    MediumParams medium;
    // Scales the light speed seen by both solvers; the dimensionless groups
    // stay fixed when the other rates are chosen to match.
    double c_scale = 1.0;
    std::optional<DipoleSpec> dipole;
    GridSpec grid;
    PulseSpec pulse;
    ControlSchedule schedule;
    double horizon = 180e-6;
    double snapshot_dt = 15e-6;
    AnalysisSettings analysis;
    OracleSettings oracle;
    OutputSettings output;

    /// Medium as seen by the adiabatic solver (c already scaled).
    MediumParams effective_medium() const;
    /// Cross-field checks; throws config naming the offending field.
    void validate() const;

    bool operator==(const Scenario&) const = default;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string serialize_scenario(const Scenario& s);

} // namespace eitmem::cli
