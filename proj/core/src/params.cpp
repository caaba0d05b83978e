#include "eitmem/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "eitmem/error.hpp"

namespace eitmem {

namespace {

void require_positive(double v, const char* name)
{
    require(std::isfinite(v) && v > 0.0, ErrorCategory::invalid_input,
            std::string(name) + " must be finite and > 0");
}

} // namespace

double MediumParams::g_sqrtN() const
{
    return g * std::sqrt(N);
}

void MediumParams::validate() const
{
    require_positive(g, "g");
    require(std::isfinite(N) && N >= 1.0, ErrorCategory::invalid_input, "N must be >= 1");
    require_positive(L, "L");
    require_positive(cell_diameter, "cell_diameter");
    require_positive(nu_p, "nu_p");
    require_positive(gamma_ba, "gamma_ba");
    require(std::isfinite(gamma_bc) && gamma_bc >= 0.0, ErrorCategory::invalid_input,
            "gamma_bc must be finite and >= 0");
    require(std::isfinite(delta) && std::isfinite(delta_p), ErrorCategory::invalid_input,
            "detunings must be finite");
    require_positive(c, "c");
    require(g2N() > 0.0 && std::isfinite(g2N()), ErrorCategory::invalid_input,
            "g^2 N must be finite and > 0");
}

void DipoleSpec::validate() const
{
    require_positive(dipole_moment, "dipole_moment");
    require_positive(polarization_overlap, "polarization_overlap");
    require(polarization_overlap <= 1.0, ErrorCategory::invalid_input,
            "polarization_overlap must be <= 1");
    require_positive(quantization_volume, "quantization_volume");
}

double cylinder_volume(double length, double diameter)
{
    require_positive(length, "length");
    require_positive(diameter, "diameter");
    const double r = 0.5 * diameter;
    return std::numbers::pi * r * r * length;
}

double compute_g_from_dipole(const DipoleSpec& spec, double nu_p)
{
    spec.validate();
    require_positive(nu_p, "nu_p");
    const double field_per_photon =
        std::sqrt(constants::hbar * nu_p / (2.0 * constants::epsilon0 * spec.quantization_volume));
    return spec.dipole_moment * spec.polarization_overlap / constants::hbar * field_per_photon;
}

std::optional<std::string> dipole_consistency_warning(const MediumParams& params, const DipoleSpec& spec,
                                                      double factor)
{
    const double g_dipole = compute_g_from_dipole(spec, params.nu_p);
    const double ratio = g_dipole / params.g;
    if (ratio <= factor && ratio >= 1.0 / factor) {
        return std::nullopt;
    }
    std::ostringstream msg;
    msg << "dipole data give g = " << g_dipole << " rad/s but g = " << params.g
        << " rad/s is configured; the configured g is used";
    return msg.str();
}

cplx PulseSpec::value_at(double z) const
{
    const double u = (z - center_z) / width;
    return amplitude * std::exp(-u * u);
}

void PulseSpec::validate() const
{
    require(std::isfinite(amplitude.real()) && std::isfinite(amplitude.imag()),
            ErrorCategory::invalid_input, "pulse amplitude must be finite");
    require(std::isfinite(center_z), ErrorCategory::invalid_input, "pulse center must be finite");
    require_positive(width, "pulse width");
    if (length_in_medium) {
        require_positive(*length_in_medium, "pulse L_p");
    }
}

} // namespace eitmem
