#include "eitmem/oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

#include "eitmem/error.hpp"
#include "eitmem/fft.hpp"

namespace eitmem {

namespace {

using Mat3 = Eigen::Matrix<cplx, 3, 3>;

bool same_grid(const FieldGrid& a, const FieldGrid& b)
{
    return a.grid == b.grid && a.size() == b.size();
}

void validate_oracle_params(const MediumParams& p)
{
    auto nonneg = [](double v, const char* name) {
        require(std::isfinite(v) && v >= 0.0, ErrorCategory::invalid_input,
                std::string(name) + " must be finite and >= 0");
    };
    nonneg(p.g, "g");
    nonneg(p.gamma_ba, "gamma_ba");
    nonneg(p.gamma_bc, "gamma_bc");
    require(std::isfinite(p.N) && p.N >= 1.0, ErrorCategory::invalid_input, "N must be >= 1");
    require(std::isfinite(p.c) && p.c > 0.0, ErrorCategory::invalid_input, "c must be > 0");
    require(std::isfinite(p.delta) && std::isfinite(p.delta_p), ErrorCategory::invalid_input,
            "detunings must be finite");
}

// Generator of the local block acting on (E, sqrt(N) sigma_ba, sqrt(N) sigma_bc).
Mat3 reaction_generator(const MediumParams& p, double omega)
{
    const cplx i(0.0, 1.0);
    const double G = p.g * std::sqrt(p.N);
    Mat3 m = Mat3::Zero();
    m(0, 1) = i * G;
    m(1, 0) = i * G;
    m(1, 1) = -cplx(p.gamma_ba, p.delta + p.delta_p);
    m(1, 2) = i * omega;
    m(2, 1) = i * omega; // conj(Omega) with Omega real
    m(2, 2) = -cplx(p.gamma_bc, p.delta_p);
    return m;
}

Mat3 propagator(const Mat3& m, double h, StiffHandling how)
{
    const Mat3 a = m * cplx(h, 0.0);
    if (how == StiffHandling::exact_exponential) {
        return a.exp();
    }
    const Mat3 id = Mat3::Identity();
    return (id - 0.5 * a).inverse() * (id + 0.5 * a);
}

struct Fields
{
    std::vector<cplx> e;
    std::vector<cplx> ba; // scaled by sqrt(N)
    std::vector<cplx> bc; // scaled by sqrt(N)
};

// Plain complex product; std::complex operator* carries inf/nan recovery
// that dominates the inner loops.
inline cplx mul(cplx a, cplx b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void apply_block(const Mat3& u, Fields& f)
{
    const std::size_t n = f.e.size();
    for (std::size_t j = 0; j < n; ++j) {
        const cplx x0 = f.e[j];
        const cplx x1 = f.ba[j];
        const cplx x2 = f.bc[j];
        f.e[j] = mul(u(0, 0), x0) + mul(u(0, 1), x1) + mul(u(0, 2), x2);
        f.ba[j] = mul(u(1, 0), x0) + mul(u(1, 1), x1) + mul(u(1, 2), x2);
        f.bc[j] = mul(u(2, 0), x0) + mul(u(2, 1), x1) + mul(u(2, 2), x2);
    }
}

bool finite(const Fields& f)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < f.e.size(); ++j) {
        acc += std::norm(f.e[j]) + std::norm(f.ba[j]) + std::norm(f.bc[j]);
    }
    return std::isfinite(acc);
}

// Cached propagator for the frozen control value at a step midpoint.
class BlockCache
{
public:
    BlockCache(const MediumParams& p, StiffHandling how) : m_params(p), m_how(how) {}

    const Mat3& get(double omega, double h)
    {
        if (!m_valid || omega != m_omega || h != m_h) {
            m_u = propagator(reaction_generator(m_params, omega), h, m_how);
            m_omega = omega;
            m_h = h;
            m_valid = true;
        }
        return m_u;
    }

private:
    const MediumParams& m_params;
    StiffHandling m_how;
    bool m_valid = false;
    double m_omega = 0.0;
    double m_h = 0.0;
    Mat3 m_u;
};

double control_omega(const ControlSchedule& schedule, const MediumParams& p, double t)
{
    return eval_schedule(schedule, p, t).omega;
}

[[noreturn]] void report_nan(std::size_t step, double t)
{
    std::ostringstream msg;
    msg << "oracle produced a non-finite value at step " << step << " (t = " << t << " s)";
    fail(ErrorCategory::numerics, msg.str());
}

} // namespace

void OracleState::validate() const
{
    require(same_grid(e_field, sigma_ba) && same_grid(e_field, sigma_bc), ErrorCategory::invalid_input,
            "oracle state fields must share one grid");
    require(e_field.size() == e_field.grid.n_points, ErrorCategory::invalid_input,
            "oracle state size does not match its grid");
    require(e_field.all_finite() && sigma_ba.all_finite() && sigma_bc.all_finite(),
            ErrorCategory::invalid_input, "oracle state is not finite");
}

std::string to_string(OracleScheme s)
{
    return s == OracleScheme::splitting_spectral_advection ? "splitting_spectral_advection" : "explicit_upwind";
}

std::string to_string(StiffHandling s)
{
    return s == StiffHandling::exact_exponential ? "exact_exponential" : "implicit";
}

OracleScheme parse_oracle_scheme(const std::string& s)
{
    if (s == "splitting_spectral_advection" || s == "splitting") {
        return OracleScheme::splitting_spectral_advection;
    }
    if (s == "explicit_upwind" || s == "upwind") {
        return OracleScheme::explicit_upwind;
    }
    fail(ErrorCategory::config, "unknown oracle scheme '" + s + "'");
}

StiffHandling parse_stiff_handling(const std::string& s)
{
    if (s == "exact_exponential" || s == "exact") {
        return StiffHandling::exact_exponential;
    }
    if (s == "implicit") {
        return StiffHandling::implicit;
    }
    fail(ErrorCategory::config, "unknown stiff handling '" + s + "'");
}

void OracleConfig::validate(const MediumParams& params, const GridSpec& grid) const
{
    require(std::isfinite(dt) && dt > 0.0, ErrorCategory::invalid_input, "oracle dt must be > 0");
    require(std::isfinite(c_scale) && c_scale > 0.0 && c_scale <= 1.0, ErrorCategory::invalid_input,
            "c_scale must be in (0, 1]");
    require(std::isfinite(snapshot_dt) && snapshot_dt >= 0.0, ErrorCategory::invalid_input,
            "snapshot_dt must be >= 0");
    if (scheme == OracleScheme::explicit_upwind) {
        const double limit = grid.dz() / (params.c * c_scale);
        if (dt > limit) {
            std::ostringstream msg;
            msg << "CFL violation: dt = " << dt << " s exceeds dz / c = " << limit << " s";
            fail(ErrorCategory::invalid_input, msg.str());
        }
    }
}

OracleState zero_oracle_state(const GridSpec& grid, double t)
{
    return {FieldGrid(grid), FieldGrid(grid), FieldGrid(grid), t};
}

std::vector<OracleState> integrate_reduced(const MediumParams& params, const GridSpec& grid,
                                           const OracleState& initial, const ControlSchedule& schedule,
                                           double horizon, const OracleConfig& cfg)
{
    validate_oracle_params(params);
    grid.validate();
    initial.validate();
    require(initial.e_field.grid == grid, ErrorCategory::invalid_input,
            "initial oracle state is on a different grid");
    require(std::isfinite(horizon) && horizon > 0.0, ErrorCategory::invalid_input, "horizon must be > 0");
    cfg.validate(params, grid);

    // Output instants relative to initial.t.
    std::vector<double> marks;
    if (cfg.snapshot_dt > 0.0) {
        const double ratio = horizon / cfg.snapshot_dt;
        const double count = std::round(ratio);
        require(count >= 1.0 && std::abs(ratio - count) <= 1e-9 * count, ErrorCategory::invalid_input,
                "oracle snapshot_dt must divide the horizon");
        for (int j = 1; j <= static_cast<int>(count); ++j) {
            marks.push_back(horizon * j / count);
        }
    } else {
        marks.push_back(horizon);
    }

    const double c = params.c * cfg.c_scale;
    const double sqrtN = std::sqrt(params.N);
    const std::size_t n = grid.n_points;
    const bool spectral = cfg.scheme == OracleScheme::splitting_spectral_advection;
    const std::vector<double> k = grid.wavenumbers();

    Fields f;
    f.e = initial.e_field.values;
    f.ba = initial.sigma_ba.values;
    f.bc = initial.sigma_bc.values;
    for (std::size_t j = 0; j < n; ++j) {
        f.ba[j] *= sqrtN;
        f.bc[j] *= sqrtN;
    }
    if (spectral) {
        // The block is uniform in z, so it can act on Fourier modes directly.
        fft::forward_inplace(f.e);
        fft::forward_inplace(f.ba);
        fft::forward_inplace(f.bc);
    }

    auto to_state = [&](double t) {
        Fields g = f;
        if (spectral) {
            fft::inverse_inplace(g.e);
            fft::inverse_inplace(g.ba);
            fft::inverse_inplace(g.bc);
        }
        for (std::size_t j = 0; j < n; ++j) {
            g.ba[j] /= sqrtN;
            g.bc[j] /= sqrtN;
        }
        return OracleState{FieldGrid(grid, std::move(g.e)), FieldGrid(grid, std::move(g.ba)),
                           FieldGrid(grid, std::move(g.bc)), t};
    };

    std::vector<OracleState> out;
    out.push_back(initial);

    BlockCache cache(params, cfg.stiff_handling);
    std::vector<cplx> half_shift(n);
    double shift_h = -1.0;
    std::vector<cplx> prev(n);
    std::size_t step = 0;
    double t_rel = 0.0;

    for (double mark : marks) {
        const double span = mark - t_rel;
        const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / cfg.dt - 1e-9)));
        const double h = span / static_cast<double>(steps);
        if (spectral && h != shift_h) {
            for (std::size_t m = 0; m < n; ++m) {
                half_shift[m] = std::exp(cplx(0.0, -0.5 * k[m] * c * h));
            }
            shift_h = h;
        }
        const double courant = c * h / grid.dz();

        for (std::size_t s = 0; s < steps; ++s) {
            const double t0 = initial.t + t_rel + static_cast<double>(s) * h;
            const Mat3& u = cache.get(control_omega(schedule, params, t0 + 0.5 * h), h);
            if (spectral) {
                for (std::size_t m = 0; m < n; ++m) {
                    f.e[m] = mul(f.e[m], half_shift[m]);
                }
                apply_block(u, f);
                for (std::size_t m = 0; m < n; ++m) {
                    f.e[m] = mul(f.e[m], half_shift[m]);
                }
            } else {
                prev = f.e;
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx left = prev[j == 0 ? n - 1 : j - 1];
                    f.e[j] = prev[j] - courant * (prev[j] - left);
                }
                apply_block(u, f);
            }
            ++step;
            if (!finite(f)) {
                report_nan(step, t0 + h);
            }
        }
        t_rel = mark;
        out.push_back(to_state(initial.t + t_rel));
    }
    return out;
}

} // namespace eitmem
