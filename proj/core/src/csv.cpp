#include "eitmem/csv.hpp"

#include <fmt/format.h>

#include "eitmem/polariton.hpp"

namespace eitmem {

std::string format_number(double x)
{
    return fmt::format("{:.17g}", x);
}

namespace {

void put(fmt::memory_buffer& buf, cplx v)
{
    fmt::format_to(std::back_inserter(buf), ",{:.17g},{:.17g},{:.17g}", v.real(), v.imag(), std::abs(v));
}

const char* kFieldHeader = "t,z,psi_re,psi_im,psi_abs,phi_re,phi_im,phi_abs,e_re,e_im,e_abs,"
                           "sigma_bc_re,sigma_bc_im,sigma_bc_abs\n";

void write_rows(std::ostream& os, double t, const FieldGrid& psi, const FieldGrid& phi, const FieldGrid& e,
                const FieldGrid& sbc)
{
    fmt::memory_buffer buf;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g}", t, psi.grid.z(j));
        put(buf, psi.values[j]);
        put(buf, phi.values[j]);
        put(buf, e.values[j]);
        put(buf, sbc.values[j]);
        buf.push_back('\n');
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

} // namespace

void write_snapshots_csv(std::ostream& os, const SimulationResult& result)
{
    os << kFieldHeader;
    for (const auto& s : result.snapshots) {
        write_rows(os, s.t, s.psi, s.phi, s.e, s.sigma_bc);
    }
}

void write_trace_csv(std::ostream& os, const std::vector<CoefficientSample>& trace)
{
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "t,alpha1,alpha2,beta,v_g\n");
    for (const auto& c : trace) {
        fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", c.t, c.alpha1,
                       c.alpha2, c.beta, c.v_g);
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_oracle_csv(std::ostream& os, const std::vector<OracleState>& states, const OracleConfig& cfg,
                      const MediumParams& params, const ControlSchedule& schedule)
{
    os << fmt::format("# scheme={} stiff={} dt={:.17g} c_scale={:.17g}\n", to_string(cfg.scheme),
                      to_string(cfg.stiff_handling), cfg.dt, cfg.c_scale);
    os << kFieldHeader;
    for (const auto& s : states) {
        const double theta = eval_schedule(schedule, params, s.t).theta;
        const PolaritonPair p = to_polaritons(s.e_field, s.sigma_bc, theta, params.N);
        write_rows(os, s.t, p.psi, p.phi, s.e_field, s.sigma_bc);
    }
}

} // namespace eitmem
