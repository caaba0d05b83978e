#include <doctest.h>

#include <cmath>

#include "eitmem/analysis.hpp"
#include "eitmem/error.hpp"

#include "../support/checks.hpp"
#include "../support/generators.hpp"
#include "../support/reference_values.hpp"

using namespace eitmem;

namespace {

SimulationOptions forced()
{
    SimulationOptions o;
    o.force = true;
    o.record_trace = false;
    return o;
}

FieldGrid gaussian(const GridSpec& g, double center, double width, cplx amp = 1.0)
{
    FieldGrid f(g);
    for (std::size_t j = 0; j < g.n_points; ++j) {
        const double u = (g.z(j) - center) / width;
        f.values[j] = amp * std::exp(-u * u);
    }
    return f;
}

SimulationResult run(const MediumParams& p, const ControlSchedule& s, double horizon, double dt)
{
    return simulate(p, GridSpec{}, PulseSpec{}, s, horizon, dt, forced());
}

} // namespace

TEST_CASE("peak location is exact for a sampled Gaussian")
{
    const GridSpec g;
    for (double c : {-2e-3, -1.2345e-3, 0.0, 3.3e-3}) {
        const PeakEstimate pk = locate_peak(gaussian(g, c, 1e-3, 0.7));
        CHECK(std::abs(pk.z - c) < 1e-9);
        CHECK(pk.amplitude == doctest::Approx(0.7).epsilon(1e-9));
    }
}

TEST_CASE("a stationary pulse does not move")
{
    MediumParams p;
    p.gamma_bc = 0.0;
    const ControlSchedule s = ControlSchedule::constant(1.0); // v_g ~ 3e-12 m/s
    const PulseTrack tr = track_pulse(run(p, s, 100e-6, 10e-6));
    const double dz = GridSpec{}.dz();
    for (double z : tr.peak_z) {
        CHECK(std::abs(z - tr.peak_z.front()) < dz);
    }
    CHECK(std::abs(fit_velocity(tr, 0.0, 100e-6).slope) < 1e-3);
}

TEST_CASE("velocities of the default profile")
{
    const MediumParams p;
    const PulseTrack tr = track_pulse(run(p, ControlSchedule{}, 180e-6, 1e-6));
    // control on: 75 m/s plus the floor
    CHECK(fit_velocity(tr, 0.0, 10e-6).slope == doctest::Approx(75.0 + v_g_min(p)).epsilon(0.05));
    // control at its floor: v_g_min plus the floor contribution
    CHECK(fit_velocity(tr, 60e-6, 95e-6).slope == doctest::Approx(3.0 + 0.03).epsilon(0.05));
}

TEST_CASE("decay fits")
{
    for (double gbc : {1e3, 1e4}) {
        MediumParams p;
        p.gamma_bc = gbc;
        const PulseTrack tr = track_pulse(run(p, ControlSchedule{}, 180e-6, 1e-6));
        const DecayFit off = fit_decay(tr, 60e-6, 95e-6);
        CHECK(off.rate == doctest::Approx(gbc).epsilon(0.02));
        CHECK_FALSE(off.poor_fit);
    }
    MediumParams p;
    p.gamma_bc = 0.0;
    const PulseTrack tr = track_pulse(run(p, ControlSchedule{}, 180e-6, 5e-6));
    CHECK(std::abs(fit_decay(tr, 0.0, 180e-6).rate) <= 1e-6 * p.gamma_ba);
}

TEST_CASE("decay fit guards")
{
    PulseTrack tr;
    tr.times = {0.0, 1.0, 2.0, 3.0, 4.0};
    tr.peak_amp = {1.0, 0.2, 1.0, 0.2, 1.0};
    tr.peak_z = tr.width = tr.imag_fraction = std::vector<double>(5, 0.0);
    const DecayFit bad = fit_decay(tr, 0.0, 4.0);
    CHECK(bad.poor_fit);
    CHECK_FALSE(bad.warning.empty());
    CHECK_THROWS_AS(fit_decay(tr, 0.0, 1.0), Error);
}

TEST_CASE("steady windows of the default profile")
{
    const auto w = steady_windows(ControlSchedule{}, MediumParams{}, 180e-6, 5e-6);
    REQUIRE(w.size() == 3);
    CHECK(w[0].control_on);
    CHECK_FALSE(w[1].control_on);
    CHECK(w[2].control_on);
    CHECK(w[0].t0 == 0.0);
    CHECK(w[1].t0 > 30e-6);
    CHECK(w[1].t1 < 125e-6);
}

TEST_CASE("output prediction")
{
    const MediumParams p;
    const ControlSchedule s;
    const FieldGrid input = sample_pulse(GridSpec{}, PulseSpec{});

    SUBCASE("zero storage time is the identity")
    {
        const PredictedOutput o = predict_output(p, s, input, 0.0, 0.0);
        CHECK(o.amplitude_factor == 1.0);
        CHECK(chk::rel_linf(o.field, input) < 1e-12);
    }
    SUBCASE("default run")
    {
        const PredictedOutput simple = predict_output(p, s, input, 0.0, 165e-6, PredictMode::simple);
        const PredictedOutput exact = predict_output(p, s, input, 0.0, 165e-6, PredictMode::exact);
        CHECK(chk::rel(simple.amplitude_factor, ref::decay_factor_165us) < 1e-12);
        CHECK(chk::rel(exact.amplitude_factor, simple.amplitude_factor) < 1e-2);
        CHECK(chk::rel(simple.displacement, ref::exponent_0_165us_w) < 1e-8);

        const SimulationResult r = run(p, s, 165e-6, 165e-6);
        CHECK(chk::rel(r.snapshots.back().psi.max_abs(), 0.2 * simple.amplitude_factor) < 0.02);
        CHECK(chk::rel_linf(simple.field, r.snapshots.back().psi) < 0.02);
    }
    SUBCASE("off resonance is refused")
    {
        MediumParams q = p;
        q.delta_p = 10.0;
        CHECK_THROWS_AS(predict_output(q, s, input, 0.0, 165e-6), Error);
    }
}

TEST_CASE("distortion of a clean copy")
{
    const GridSpec g;
    const FieldGrid in = gaussian(g, -2e-3, 1e-3);
    SUBCASE("scaled and shifted")
    {
        const DistortionReport d = measure_distortion(in, gaussian(g, -1e-3, 1e-3, 0.5));
        CHECK(d.aligned_l2 < 1e-6);
        CHECK(d.shift == doctest::Approx(1e-3).epsilon(1e-6));
        CHECK(std::abs(d.scale - cplx(0.5, 0.0)) < 1e-6);
        CHECK(std::abs(d.phase_shift) < 1e-9);
        CHECK_FALSE(d.distorted);
        CHECK(std::string(d.verdict()) == "clean");
    }
    SUBCASE("constant phase")
    {
        const DistortionReport d = measure_distortion(in, gaussian(g, -2e-3, 1e-3, std::polar(0.3, 0.4)));
        CHECK(d.phase_shift == doctest::Approx(0.4).epsilon(1e-9));
        CHECK(d.aligned_l2 < 1e-6);
        CHECK_FALSE(d.distorted);
    }
    SUBCASE("fine ripples")
    {
        FieldGrid out = gaussian(g, -2e-3, 1e-3);
        for (std::size_t j = 0; j < g.n_points; ++j) {
            out.values[j] *= 1.0 + 0.5 * std::cos(2.0 * M_PI * g.z(j) / 1e-4);
        }
        const DistortionReport d = measure_distortion(in, out);
        CHECK(d.distorted);
        CHECK(d.high_k_fraction > 10.0 * d.input_high_k_fraction);
        CHECK(std::string(d.verdict()) == "distorted");
    }
    SUBCASE("zero input is refused")
    {
        CHECK_THROWS_AS(measure_distortion(FieldGrid(g), in), Error);
    }
}

TEST_CASE("detuned runs pick up an imaginary component")
{
    for (const auto& [delta, delta_p] : {std::pair{0.0, 5e2}, std::pair{2e6, 0.0}}) {
        MediumParams p;
        p.delta = delta;
        p.delta_p = delta_p;
        const SimulationResult r = run(p, ControlSchedule{}, 165e-6, 165e-6);
        const DistortionReport d = measure_distortion(r.snapshots.front().psi, r.snapshots.back().psi);
        CHECK(d.imag_fraction > 1e-3);
    }
}

TEST_CASE("design limits")
{
    const MediumParams p;
    const DesignLimits lim = design_limits(p, 1e-3, 53e-6);
    CHECK(chk::rel(lim.delta_p_max, ref::delta_p_max) < 1e-12);
    CHECK(chk::rel(lim.delta_max, ref::delta_max) < 1e-12);
    CHECK(lim.delta_p_max == doctest::Approx(2e2).epsilon(0.2));
    CHECK(lim.delta_max == doctest::Approx(2e6).epsilon(0.2));
    CHECK(chk::rel(lim.t_transit_max, ref::t_transit_max) < 1e-12);
    CHECK(lim.bw_limit == lim.delta_max);
    CHECK(lim.bw_mismatch_limit == lim.delta_p_max);
    CHECK(lim.delta_max / lim.delta_p_max == doctest::Approx(p.gamma_ba / p.gamma_bc));

    MediumParams q = p;
    q.gamma_bc = 0.0;
    CHECK(std::isinf(design_limits(q, 1e-3, 53e-6).delta_max));
    CHECK_THROWS_AS(design_limits(p, 0.0, 53e-6), Error);
}

TEST_CASE("design limits scale with pulse length, storage time and density")
{
    gen::Rng rng(401);
    for (int i = 0; i < 500; ++i) {
        MediumParams p;
        p.N = rng.log_uniform(1e6, 1e10);
        p.gamma_bc = rng.log_uniform(1e2, 1e5);
        const double L = rng.log_uniform(1e-4, 1e-2), T = rng.log_uniform(1e-6, 1e-3);
        const double a = rng.uniform(1.5, 4.0);
        const DesignLimits base = design_limits(p, L, T);
        const DesignLimits longer = design_limits(p, a * L, T);
        const DesignLimits slower = design_limits(p, L, a * T);
        MediumParams q = p;
        q.N *= a;
        const DesignLimits denser = design_limits(q, L, T);
        CHECK(chk::rel(longer.delta_p_max, a * base.delta_p_max) < 1e-12);
        CHECK(chk::rel(longer.delta_max, a * base.delta_max) < 1e-12);
        CHECK(chk::rel(slower.delta_p_max, base.delta_p_max / a) < 1e-12);
        CHECK(chk::rel(denser.delta_max, a * base.delta_max) < 1e-12);
    }
}

TEST_CASE("low-intensity check")
{
    const MediumParams p;
    const ControlSchedule s;
    const SimulationResult r = run(p, s, 180e-6, 5e-6);
    const LowIntensityReport ok = check_low_intensity(r, p, s);
    CHECK(ok.pass);
    CHECK(ok.flagged_times.empty());
    CHECK(ok.max_ratio < 0.1);
    // off-window ratio is of order 1e2 / 1e5
    double off = 0.0;
    for (const auto& x : ok.samples) {
        if (x.t >= 60e-6 && x.t <= 95e-6) off = std::max(off, x.ratio);
    }
    CHECK(off > 1e-3 / 3.0);
    CHECK(off < 3e-3);

    PulseSpec loud;
    loud.amplitude = 0.2 * 1e4;
    const SimulationResult big = simulate(p, GridSpec{}, loud, s, 180e-6, 5e-6, forced());
    const LowIntensityReport bad = check_low_intensity(big, p, s);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.flagged_times.empty());

    PulseSpec silent;
    silent.amplitude = 0.0;
    const SimulationResult quiet = simulate(p, GridSpec{}, silent, s, 180e-6, 30e-6, forced());
    CHECK(check_low_intensity(quiet, p, s).max_ratio == 0.0);
}

TEST_CASE("tracked field names")
{
    for (TrackedField f : {TrackedField::psi, TrackedField::e, TrackedField::sigma_bc}) {
        CHECK(parse_tracked_field(to_string(f)) == f);
    }
    CHECK_THROWS_AS(parse_tracked_field("phi"), Error);
}
