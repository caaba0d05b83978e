// Links only the oracle and base libraries: the integrator must stand on its
// own, without the coefficient algebra or the adiabatic solver.
#include <doctest.h>

#include <cmath>

#include "eitmem/control.hpp"
#include "eitmem/error.hpp"
#include "eitmem/oracle.hpp"

#include "../support/checks.hpp"
#include "../support/generators.hpp"

using namespace eitmem;

namespace {

// slowed light: c_eff ~ 300 m/s, g sqrt(N) = 1e8
MediumParams scaled()
{
    MediumParams p;
    p.g = 1e4;
    p.N = 1e8;
    p.gamma_ba = 1e5;
    p.gamma_bc = 1e3;
    return p;
}

constexpr double kScale = 1e-6;
const GridSpec kGrid{-8e-3, 8e-3, 1024};

FieldGrid gaussian(const GridSpec& g, double center, double width, cplx amp = 1.0)
{
    FieldGrid f(g);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double u = (g.z(j) - center) / width;
        f.values[j] = amp * std::exp(-u * u);
    }
    return f;
}

FieldGrid roll(const FieldGrid& f, std::size_t m)
{
    FieldGrid out(f.grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
        out.values[(j + m) % f.size()] = f.values[j];
    }
    return out;
}

// dark state at mixing angle theta, no optical coherence
OracleState dark_state(const MediumParams& p, const FieldGrid& psi, double theta)
{
    OracleState s = zero_oracle_state(psi.grid);
    s.e_field = std::cos(theta) * psi;
    s.sigma_bc = (-std::sin(theta) / std::sqrt(p.N)) * psi;
    return s;
}

OracleConfig config(double dt, double snapshot_dt = 0.0)
{
    OracleConfig c;
    c.dt = dt;
    c.c_scale = kScale;
    c.snapshot_dt = snapshot_dt;
    return c;
}

double diff_linf(const OracleState& a, const OracleState& b)
{
    return chk::rel_linf(a.e_field, b.e_field);
}

} // namespace

TEST_CASE("zero state stays zero")
{
    const MediumParams p = scaled();
    const auto run = integrate_reduced(p, kGrid, zero_oracle_state(kGrid), ControlSchedule::constant(1e8), 1e-6,
                                       config(1e-8, 5e-7));
    REQUIRE(run.size() == 3);
    for (const auto& s : run) {
        CHECK(s.e_field.max_abs() == 0.0);
        CHECK(s.sigma_ba.max_abs() == 0.0);
        CHECK(s.sigma_bc.max_abs() == 0.0);
    }
    CHECK(run.back().t == doctest::Approx(1e-6));
}

TEST_CASE("uncoupled probe advects at the light speed")
{
    MediumParams p = scaled();
    p.g = 0.0;
    OracleState s0 = zero_oracle_state(kGrid);
    s0.e_field = gaussian(kGrid, -2e-3, 1e-3, {0.3, -0.1});
    const double c_eff = p.c * kScale;
    const double T = 40.0 * kGrid.dz() / c_eff;
    const auto run = integrate_reduced(p, kGrid, s0, ControlSchedule::constant(1e8), T, config(T / 97.0));
    CHECK(chk::rel_linf(run.back().e_field, roll(s0.e_field, 40)) < 1e-12);
    CHECK(run.back().sigma_ba.max_abs() == 0.0);
    CHECK(run.back().sigma_bc.max_abs() == 0.0);
}

TEST_CASE("coherences relax at their own rates without light or control")
{
    MediumParams p = scaled();
    p.g = 0.0;
    p.delta_p = 300.0;
    p.delta = 1e4;
    gen::Rng rng(301);
    OracleState s0 = zero_oracle_state(kGrid);
    s0.sigma_ba = rng.noise(kGrid);
    s0.sigma_bc = rng.noise(kGrid);
    const double T = 20e-6;
    const auto run = integrate_reduced(p, kGrid, s0, ControlSchedule::constant(1e-200), T, config(1e-7));
    const cplx ba = std::exp(-cplx(p.gamma_ba, p.delta + p.delta_p) * T);
    const cplx bc = std::exp(-cplx(p.gamma_bc, p.delta_p) * T);
    CHECK(chk::rel_linf(run.back().sigma_ba, ba * s0.sigma_ba) < 1e-10);
    CHECK(chk::rel_linf(run.back().sigma_bc, bc * s0.sigma_bc) < 1e-10);
}

TEST_CASE("lossless dark state travels at c cos^2 theta")
{
    MediumParams p = scaled();
    p.gamma_bc = 0.0;
    const double omega = 1e8 / std::sqrt(3.0);
    const double theta = std::atan(p.g_sqrtN() / omega);
    const double v = p.c * kScale * std::cos(theta) * std::cos(theta);
    CHECK(v == doctest::Approx(74.948).epsilon(1e-4));

    const FieldGrid psi = gaussian(kGrid, -2e-3, 1e-3);
    const double T = 20e-6;
    const auto run =
        integrate_reduced(p, kGrid, dark_state(p, psi, theta), ControlSchedule::constant(omega), T, config(2e-9));
    const FieldGrid expected = std::cos(theta) * gaussian(kGrid, -2e-3 + v * T, 1e-3);
    CHECK(chk::rel_linf(run.back().e_field, expected) < 1e-2);
}

TEST_CASE("splitting converges at second order")
{
    const MediumParams p = scaled();
    const double omega = 1e8 / std::sqrt(3.0);
    const double theta = std::atan(p.g_sqrtN() / omega);
    const OracleState s0 = dark_state(p, gaussian(kGrid, -2e-3, 1e-3), theta);
    const ControlSchedule sched = ControlSchedule::constant(omega);
    const double T = 10e-6;
    std::vector<OracleState> finals;
    for (double dt : {8e-9, 4e-9, 2e-9, 1e-9}) {
        finals.push_back(integrate_reduced(p, kGrid, s0, sched, T, config(dt)).back());
    }
    const double e1 = diff_linf(finals[0], finals[1]);
    const double e2 = diff_linf(finals[1], finals[2]);
    const double e3 = diff_linf(finals[2], finals[3]);
    MESSAGE("halving ratios " << e2 / e1 << " " << e3 / e2);
    CHECK(e2 / e1 <= 0.25);
    CHECK(e3 / e2 <= 0.25);
}

TEST_CASE("splitting converges at second order under a switching control")
{
    const MediumParams p = scaled();
    TanhControl tc;
    tc.scale = 0.5;
    tc.floor = 0.05;
    tc.steepness = 1e6;
    tc.t1 = 4e-6;
    tc.t2 = 8e-6;
    const ControlSchedule sched(tc);
    const double theta = sched.evaluate(p, 0.0).theta;
    const OracleState s0 = dark_state(p, gaussian(kGrid, -2e-3, 1e-3), theta);
    const double T = 10e-6;
    std::vector<OracleState> finals;
    for (double dt : {8e-9, 4e-9, 2e-9, 1e-9}) {
        finals.push_back(integrate_reduced(p, kGrid, s0, sched, T, config(dt)).back());
    }
    const double e1 = diff_linf(finals[0], finals[1]);
    const double e2 = diff_linf(finals[1], finals[2]);
    const double e3 = diff_linf(finals[2], finals[3]);
    MESSAGE("halving ratios " << e2 / e1 << " " << e3 / e2);
    CHECK(e2 / e1 <= 0.25);
    CHECK(e3 / e2 <= 0.25);
}

TEST_CASE("stiff handlings agree")
{
    const MediumParams p = scaled();
    const double omega = 1e8 / std::sqrt(3.0);
    const double theta = std::atan(p.g_sqrtN() / omega);
    const OracleState s0 = dark_state(p, gaussian(kGrid, -2e-3, 1e-3), theta);
    OracleConfig a = config(1e-9);
    OracleConfig b = a;
    b.stiff_handling = StiffHandling::implicit;
    const auto ra = integrate_reduced(p, kGrid, s0, ControlSchedule::constant(omega), 5e-6, a);
    const auto rb = integrate_reduced(p, kGrid, s0, ControlSchedule::constant(omega), 5e-6, b);
    CHECK(diff_linf(rb.back(), ra.back()) < 1e-3);
}

TEST_CASE("upwind scheme conserves the probe integral when uncoupled")
{
    MediumParams p = scaled();
    p.g = 0.0;
    OracleState s0 = zero_oracle_state(kGrid);
    s0.e_field = gaussian(kGrid, -2e-3, 1e-3);
    OracleConfig cfg = config(0.5 * kGrid.dz() / (p.c * kScale));
    cfg.scheme = OracleScheme::explicit_upwind;
    const double T = 100.0 * cfg.dt;
    const auto run = integrate_reduced(p, kGrid, s0, ControlSchedule::constant(1e8), T, cfg);
    cplx sum0 = 0.0, sum1 = 0.0;
    for (std::size_t j = 0; j < kGrid.n_points; ++j) {
        sum0 += s0.e_field.values[j];
        sum1 += run.back().e_field.values[j];
    }
    CHECK(std::abs(sum1 - sum0) < 1e-12 * std::abs(sum0));
    // peak moved by 50 cells, give or take one
    const auto moved = static_cast<long>(run.back().e_field.argmax_abs()) -
                       static_cast<long>(s0.e_field.argmax_abs());
    CHECK(std::abs(moved - 50) <= 1);
}

TEST_CASE("conjugation gauge symmetry on resonance")
{
    // (E, s_ba, s_bc) -> (E*, -s_ba*, s_bc*) maps solutions to solutions
    const MediumParams p = scaled();
    gen::Rng rng(302);
    for (int i = 0; i < 3; ++i) {
        OracleState s0 = zero_oracle_state(kGrid);
        s0.e_field = rng.smooth_pulse(kGrid);
        s0.sigma_ba = (1e-5) * rng.smooth_pulse(kGrid);
        s0.sigma_bc = (1e-4) * rng.smooth_pulse(kGrid);
        OracleState m0 = s0;
        for (std::size_t j = 0; j < kGrid.n_points; ++j) {
            m0.e_field.values[j] = std::conj(s0.e_field.values[j]);
            m0.sigma_ba.values[j] = -std::conj(s0.sigma_ba.values[j]);
            m0.sigma_bc.values[j] = std::conj(s0.sigma_bc.values[j]);
        }
        const ControlSchedule sched = ControlSchedule::constant(rng.log_uniform(1e7, 1e9));
        const auto a = integrate_reduced(p, kGrid, s0, sched, 2e-6, config(1e-9)).back();
        const auto b = integrate_reduced(p, kGrid, m0, sched, 2e-6, config(1e-9)).back();
        FieldGrid e(kGrid), ba(kGrid), bc(kGrid);
        for (std::size_t j = 0; j < kGrid.n_points; ++j) {
            e.values[j] = std::conj(a.e_field.values[j]);
            ba.values[j] = -std::conj(a.sigma_ba.values[j]);
            bc.values[j] = std::conj(a.sigma_bc.values[j]);
        }
        CHECK(chk::rel_linf(b.e_field, e) < 1e-12);
        CHECK(chk::rel_linf(b.sigma_ba, ba) < 1e-12);
        CHECK(chk::rel_linf(b.sigma_bc, bc) < 1e-12);
    }
}

TEST_CASE("configuration errors")
{
    const MediumParams p = scaled();
    const ControlSchedule sched = ControlSchedule::constant(1e8);
    SUBCASE("CFL bound for upwind")
    {
        OracleConfig cfg = config(2.0 * kGrid.dz() / (p.c * kScale));
        cfg.scheme = OracleScheme::explicit_upwind;
        CHECK_THROWS_AS(cfg.validate(p, kGrid), Error);
        CHECK_THROWS_AS(integrate_reduced(p, kGrid, zero_oracle_state(kGrid), sched, 1e-6, cfg), Error);
    }
    SUBCASE("c_scale range")
    {
        OracleConfig cfg = config(1e-9);
        cfg.c_scale = 2.0;
        CHECK_THROWS_AS(cfg.validate(p, kGrid), Error);
        cfg.c_scale = 0.0;
        CHECK_THROWS_AS(cfg.validate(p, kGrid), Error);
    }
    SUBCASE("snapshot spacing must divide the horizon")
    {
        CHECK_THROWS_AS(integrate_reduced(p, kGrid, zero_oracle_state(kGrid), sched, 1e-6, config(1e-9, 3e-7)),
                        Error);
    }
    SUBCASE("state on another grid")
    {
        const GridSpec other{-8e-3, 8e-3, 512};
        CHECK_THROWS_AS(integrate_reduced(p, kGrid, zero_oracle_state(other), sched, 1e-6, config(1e-9)), Error);
    }
    SUBCASE("scheme names")
    {
        CHECK(parse_oracle_scheme("splitting") == OracleScheme::splitting_spectral_advection);
        CHECK(parse_oracle_scheme(to_string(OracleScheme::explicit_upwind)) == OracleScheme::explicit_upwind);
        CHECK(parse_stiff_handling("exact") == StiffHandling::exact_exponential);
        CHECK_THROWS_AS(parse_oracle_scheme("rk4"), Error);
    }
}

TEST_CASE("overflow is reported at the first bad step")
{
    const MediumParams p = scaled();
    OracleState s0 = zero_oracle_state(kGrid);
    for (auto& v : s0.e_field.values) v = 1.7e308;
    try {
        (void)integrate_reduced(p, kGrid, s0, ControlSchedule::constant(1e8), 1e-6, config(1e-8));
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::numerics);
        CHECK(std::string(e.what()).find("step 1 (") != std::string::npos);
    }
}
