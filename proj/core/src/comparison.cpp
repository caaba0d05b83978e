#include "eitmem/comparison.hpp"

#include <cmath>

#include "eitmem/coefficients.hpp"
#include "eitmem/error.hpp"
#include "eitmem/fft.hpp"

namespace eitmem {

std::string to_string(Observable o)
{
    return o == Observable::e ? "E" : "sigma_bc";
}

OracleState seed_oracle_state(const MediumParams& params, const ControlSchedule& schedule,
                              const FieldGrid& psi, double t)
{
    const ControlState cs = eval_schedule(schedule, params, t);
    const double th = cs.theta;
    const double sq = std::sqrt(params.N);
    const cplx r = bright_ratio(th, params);
    const CoefficientSample c = exponent_integrand(th, cs.theta_dot, params);

    // sqrt(N) sigma_bc = q Psi; its rate feeds the optical coherence.
    const cplx q = -(std::sin(th) - std::cos(th) * r);
    const cplx q_dot = -(std::cos(th) + std::sin(th) * r) * cs.theta_dot;
    const cplx e_factor = std::cos(th) + std::sin(th) * r;
    const cplx i(0.0, 1.0);

    const std::vector<cplx> modes = fft::forward(psi.values);
    std::vector<cplx> e(modes.size());
    std::vector<cplx> ba(modes.size());
    std::vector<cplx> bc(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const double k = psi.grid.wavenumber(m);
        const cplx psi_rate = -(c.s_part + i * k * c.w_part) * modes[m];
        const cplx sbc = q * modes[m];
        const cplx sbc_rate = q_dot * modes[m] + q * psi_rate;
        e[m] = e_factor * modes[m];
        bc[m] = sbc / sq;
        ba[m] = (sbc_rate + params.ground_rate() * sbc) / (i * cs.omega) / sq;
    }
    return {FieldGrid(psi.grid, fft::inverse(e)), FieldGrid(psi.grid, fft::inverse(ba)),
            FieldGrid(psi.grid, fft::inverse(bc)), t};
}

namespace {

bool close(double a, double b)
{
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

void require_same_medium(const MediumParams& o, double c_scale, const MediumParams& a)
{
    const bool same = close(o.g, a.g) && close(o.N, a.N) && close(o.gamma_ba, a.gamma_ba) &&
                      close(o.gamma_bc, a.gamma_bc) && close(o.delta, a.delta) &&
                      close(o.delta_p, a.delta_p) && close(o.c * c_scale, a.c);
    require(same, ErrorCategory::invalid_input,
            "invalid comparison: oracle and adiabatic runs describe different media");
}

} // namespace

DiscrepancyReport compare_to_adiabatic(const std::vector<OracleState>& oracle_run,
                                       const MediumParams& oracle_params, double c_scale,
                                       const SimulationResult& adiabatic_run, Observable observable)
{
    require(!oracle_run.empty(), ErrorCategory::invalid_input, "invalid comparison: empty oracle run");
    require_same_medium(oracle_params, c_scale, adiabatic_run.params);
    require(oracle_run.size() == adiabatic_run.snapshots.size(), ErrorCategory::invalid_input,
            "invalid comparison: snapshot counts differ");

    DiscrepancyReport rep;
    rep.observable = observable;
    for (std::size_t i = 0; i < oracle_run.size(); ++i) {
        const OracleState& o = oracle_run[i];
        const Snapshot& a = adiabatic_run.snapshots[i];
        require(o.e_field.grid == adiabatic_run.grid, ErrorCategory::invalid_input,
                "invalid comparison: grids differ");
        require(std::abs(o.t - a.t) <= 1e-9 * std::max(1e-9, std::abs(a.t)), ErrorCategory::invalid_input,
                "invalid comparison: snapshot times differ");
        const FieldGrid& fo = observable == Observable::e ? o.e_field : o.sigma_bc;
        const FieldGrid& fa = observable == Observable::e ? a.e : a.sigma_bc;
        const FieldGrid diff = fa - fo;
        SnapshotDiscrepancy d;
        d.t = a.t;
        const double peak = fo.max_abs();
        const double norm = std::sqrt(fo.norm2());
        d.linf_rel = peak > 0.0 ? diff.max_abs() / peak : diff.max_abs();
        d.l2_rel = norm > 0.0 ? std::sqrt(diff.norm2()) / norm : std::sqrt(diff.norm2());
        rep.max_linf_rel = std::max(rep.max_linf_rel, d.linf_rel);
        rep.max_l2_rel = std::max(rep.max_l2_rel, d.l2_rel);
        rep.snapshots.push_back(d);
    }
    if (adiabatic_run.validity) {
        const ValidityReport& v = *adiabatic_run.validity;
        rep.adiabatic_length_ratio = v.adiabatic_length.ratio;
        rep.adiabatic_time_ratio = v.adiabatic_time.ratio;
        rep.high_density_ratio = v.high_density.ratio;
        rep.adiabatic_parameter = v.adiabatic_parameter;
        rep.attributed_to = v.failures();
    }
    return rep;
}

} // namespace eitmem
