#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

#include "commands.hpp"

using namespace eitmem;
using namespace eitmem::cli;

namespace {

int report(const Error& e)
{
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << "\n";
    std::cerr << nlohmann::json{{"error", {{"category", to_string(e.category())}, {"message", e.what()}}}}.dump()
              << "\n";
    return exit_code(e.category());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Light storage in Lambda-type atomic ensembles: adiabatic polariton solver"};
    app.require_subcommand(1);

    std::string scenario;
    RunFlags flags;
    std::optional<double> snapshot_dt;
    std::optional<std::string> out_dir;

    auto* run = app.add_subcommand("run", "simulate a scenario and write CSV and summary artifacts");
    run->add_option("scenario", scenario, "scenario INI file")->required();
    run->add_flag("--force", flags.force, "run even when the regime checks fail");
    run->add_flag("--oracle", flags.oracle, "also integrate the reduced Maxwell-Bloch system and compare");
    run->add_option("--out-dir", out_dir, "output directory (overrides [output] out_dir)");
    run->add_option("--snapshot-dt", snapshot_dt, "snapshot cadence in s (must divide the horizon)");

    std::optional<double> L_p;
    std::optional<double> T0;
    auto* limits = app.add_subcommand("limits", "print detuning, bandwidth and storage-time limits");
    limits->add_option("scenario", scenario, "scenario INI file")->required();
    limits->add_option("--L_p,--lp", L_p, "pulse length in the medium, m");
    limits->add_option("--T0,--t0", T0, "storage time, s");

    std::string axis;
    std::vector<double> values;
    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "scan one medium parameter and summarize each output");
    sweep->add_option("scenario", scenario, "scenario INI file")->required();
    sweep->add_option("--axis", axis, "delta, delta_p, gamma_bc or gamma_ba")->required();
    sweep->add_option("--values", values, "comma-separated values")->delimiter(',');
    sweep->add_flag("--force", flags.force, "run rows even when the regime checks fail");
    sweep->add_option("--out-dir", out_dir, "output directory (overrides [output] out_dir)");
    sweep->add_option("--jobs", jobs, "rows evaluated concurrently")->check(CLI::Range(1u, 256u));

    auto* validate = app.add_subcommand("validate", "check the scenario and its physical regime");
    validate->add_option("scenario", scenario, "scenario INI file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    flags.out_dir = out_dir;
    flags.snapshot_dt = snapshot_dt;
    try {
        if (*run) {
            return cmd_run(scenario, flags, std::cout);
        }
        if (*limits) {
            return cmd_limits(scenario, L_p, T0, std::cout);
        }
        if (*sweep) {
            return cmd_sweep(scenario, parse_sweep_axis(axis), values, flags, jobs, std::cout);
        }
        return cmd_validate(scenario, std::cout);
    } catch (const Error& e) {
        return report(e);
    } catch (const std::exception& e) {
        std::cerr << "error[numerics]: " << e.what() << "\n";
        return 4;
    }
}
