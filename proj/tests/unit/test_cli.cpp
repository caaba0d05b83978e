#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "scenario.hpp"

using namespace eitmem;
using namespace eitmem::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = EITMEM_SCENARIO_DIR;

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::path(EITMEM_TEST_SCRATCH) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_file(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
    return p;
}

// expects a config error whose message contains every fragment
void check_config_error(const std::string& text, std::initializer_list<std::string> fragments)
{
    try {
        (void)parse_scenario(text, "test.ini");
        FAIL("accepted: " << text);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
        for (const auto& f : fragments) {
            CHECK_MESSAGE(std::string(e.what()).find(f) != std::string::npos, e.what());
        }
    }
}

Scenario fast_scenario()
{
    Scenario s = load_scenario((kScenarios / "scaled_oracle.ini").string());
    s.oracle.enabled = false;
    s.horizon = 10e-6;
    s.analysis.output_time = 10e-6;
    s.analysis.T0 = 10e-6;
    return s;
}

} // namespace

TEST_CASE("default scenario survives serialize and parse")
{
    const Scenario s;
    CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("shipped scenarios load and round trip")
{
    for (const char* name : {"storage_default.ini", "storage_gbc1e3.ini", "storage_gba1e9.ini", "scaled_oracle.ini"}) {
        CAPTURE(name);
        const Scenario s = load_scenario((kScenarios / name).string());
        CHECK_NOTHROW(s.validate());
        CHECK(parse_scenario(serialize_scenario(s)) == s);
    }
}

TEST_CASE("tabulated control round trips")
{
    const std::string text = "[control]\nkind = tabulated\ntimes = 0, 90e-6, 180e-6\nthetas = 1.5, 1.5, 1.5\n";
    const Scenario s = parse_scenario(text);
    CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("config errors name the line and the field")
{
    check_config_error("[medium]\ng = 1e6\nN = lots\n", {"test.ini:3", "N", "lots"});
    check_config_error("[medium]\n\ngamma_bcc = 1e4\n", {"test.ini:3", "gamma_bcc"});
    check_config_error("[mediums]\ng = 1\n", {"test.ini:1", "mediums"});
    check_config_error("[grid]\nn_points = 1000\n", {"n_points"});
    check_config_error("[control]\nkind = sawtooth\n", {"kind", "sawtooth"});
    check_config_error("[output]\nsnapshots = maybe\n", {"snapshots"});
}

TEST_CASE("a zero control floor is rejected with the reason")
{
    check_config_error("[control]\nkind = tanh\nfloor = 0\n", {"floor", "never switched off"});
}

TEST_CASE("exit codes")
{
    CHECK(exit_code(ErrorCategory::invalid_input) == 2);
    CHECK(exit_code(ErrorCategory::config) == 2);
    CHECK(exit_code(ErrorCategory::physics_validity) == 3);
    CHECK(exit_code(ErrorCategory::numerics) == 4);
    CHECK(exit_code(ErrorCategory::io) == 4);
}

TEST_CASE("limits command")
{
    const std::string file = (kScenarios / "storage_default.ini").string();
    auto limits = [&](std::optional<double> lp, std::optional<double> t0) {
        std::ostringstream out;
        CHECK(cmd_limits(file, lp, t0, out) == 0);
        std::istringstream in(out.str());
        std::string line, last;
        while (std::getline(in, line)) {
            if (!line.empty()) last = line;
        }
        return nlohmann::json::parse(last);
    };
    const auto base = limits(std::nullopt, std::nullopt);
    CHECK(base["delta_p_max"].get<double>() == doctest::Approx(200.33348901419414).epsilon(1e-12));
    const auto twice = limits(2e-3, std::nullopt);
    for (const char* key : {"delta_p_max", "delta_max", "bw_limit", "bw_mismatch_limit"}) {
        CHECK(twice[key].get<double>() == doctest::Approx(2.0 * base[key].get<double>()).epsilon(1e-12));
    }
    const auto forever = limits(std::nullopt, 1e300);
    CHECK(forever["delta_p_max"].get<double>() < 1e-290);
}

TEST_CASE("run is gated by the regime check")
{
    const fs::path dir = scratch("gated");
    RunFlags flags;
    flags.out_dir = dir.string();
    std::ostringstream out;
    try {
        (void)cmd_run((kScenarios / "storage_default.ini").string(), flags, out);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::physics_validity);
    }
    std::ostringstream validate_out;
    CHECK(cmd_validate((kScenarios / "storage_default.ini").string(), validate_out) == 3);
    CHECK(cmd_validate((kScenarios / "scaled_oracle.ini").string(), validate_out) == 0);
}

TEST_CASE("run output is byte-identical across runs")
{
    const fs::path dir = scratch("determinism");
    const Scenario s = fast_scenario();
    const fs::path ini = write_file(dir / "fast.ini", serialize_scenario(s));
    for (const char* sub : {"a", "b"}) {
        RunFlags flags;
        flags.out_dir = (dir / sub).string();
        std::ostringstream out;
        CHECK(cmd_run(ini.string(), flags, out) == 0);
    }
    for (const char* f : {"snapshots.csv", "trace.csv", "summary.json"}) {
        CAPTURE(f);
        const std::string a = slurp(dir / "a" / f);
        CHECK_FALSE(a.empty());
        CHECK(a == slurp(dir / "b" / f));
    }
    const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
    CHECK(summary.contains("validity"));
    CHECK(summary.contains("limits"));
}

TEST_CASE("run with the oracle writes the comparison")
{
    const fs::path dir = scratch("oracle");
    Scenario s = fast_scenario();
    s.snapshot_dt = 5e-6;
    const fs::path ini = write_file(dir / "fast.ini", serialize_scenario(s));
    RunFlags flags;
    flags.oracle = true;
    flags.out_dir = (dir / "out").string();
    std::ostringstream out;
    CHECK(cmd_run(ini.string(), flags, out) == 0);
    CHECK(fs::exists(dir / "out" / "oracle.csv"));
    const auto cmp = nlohmann::json::parse(slurp(dir / "out" / "comparison.json"));
    CHECK(cmp["runs"][0]["max_linf_rel"].get<double>() < 0.05);
    CHECK(slurp(dir / "out" / "oracle.csv").rfind("# scheme=", 0) == 0);
}

TEST_CASE("sweeps")
{
    const Scenario s = fast_scenario();
    CHECK(run_sweep(s, SweepAxis::delta_p, {}, false).empty());

    const std::vector<double> values = {0.0, 50.0, 100.0, 1e300};
    const auto serial = run_sweep(s, SweepAxis::delta_p, values, false, 1);
    const auto parallel = run_sweep(s, SweepAxis::delta_p, values, false, 3);
    REQUIRE(serial.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        CHECK(serial[i].value == values[i]);
        CHECK(serial[i].ok == parallel[i].ok);
        CHECK(serial[i].output_peak == parallel[i].output_peak);
        CHECK(serial[i].aligned_l2 == parallel[i].aligned_l2);
    }
    CHECK(serial[0].ok);
    CHECK(serial[0].verdict == "clean");
    // a failing row is recorded and the sweep carries on
    CHECK_FALSE(serial[3].ok);
    CHECK_FALSE(serial[3].error.empty());

    CHECK_THROWS_AS(run_sweep(s, SweepAxis::delta, std::vector<double>(1001, 0.0), false), Error);
    CHECK(parse_sweep_axis(to_string(SweepAxis::gamma_bc)) == SweepAxis::gamma_bc);
    CHECK_THROWS_AS(parse_sweep_axis("omega"), Error);
}

TEST_CASE("a missing scenario file is a config error")
{
    try {
        (void)load_scenario("/nonexistent/scenario.ini");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(exit_code(e.category()) == 2);
    }
}
