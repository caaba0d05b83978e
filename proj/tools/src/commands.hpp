#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eitmem/error.hpp"
#include "eitmem/solver.hpp"
#include "scenario.hpp"

namespace eitmem::cli {

/// 0 ok, 2 config, 3 physics validity, 4 runtime or numerics.
int exit_code(ErrorCategory category);

struct RunFlags
{
    bool force = false;
    bool oracle = false;
    std::optional<std::string> out_dir;
    std::optional<double> snapshot_dt;
};

/// Measured and predicted quantities of one finished run.
nlohmann::json summarize(const Scenario& scenario, const SimulationResult& result);

int cmd_run(const std::string& scenario_file, const RunFlags& flags, std::ostream& out);

int cmd_limits(const std::string& scenario_file, std::optional<double> L_p, std::optional<double> T0,
               std::ostream& out);

enum class SweepAxis { delta, delta_p, gamma_bc, gamma_ba };

SweepAxis parse_sweep_axis(const std::string& s);
std::string to_string(SweepAxis a);

struct SweepRow
{
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::string error_category;
    double output_peak = 0.0;
    std::string verdict;
    double aligned_l2 = 0.0;
    double phase_shift = 0.0;
    double imag_fraction = 0.0;
    double high_k_fraction = 0.0;
    std::optional<double> v_g_off;
};

/// One row per value, in input order. A failing row records its error and
/// the sweep carries on.
std::vector<SweepRow> run_sweep(const Scenario& scenario, SweepAxis axis, const std::vector<double>& values,
                                bool force, unsigned jobs = 1);

int cmd_sweep(const std::string& scenario_file, SweepAxis axis, const std::vector<double>& values,
              const RunFlags& flags, unsigned jobs, std::ostream& out);

int cmd_validate(const std::string& scenario_file, std::ostream& out);

} // namespace eitmem::cli
