#pragma once

#include <complex>
#include <optional>
#include <string>

namespace eitmem {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double c_vacuum = 2.99792458e8;    // m/s
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double epsilon0 = 8.8541878128e-12; // F/m
} // namespace constants

/**
 * Atomic ensemble and field constants of the Lambda medium. All rates are
 * angular (rad/s). c is a parameter so scaled scenarios can slow light down
 * while keeping the dimensionless groups intact.
 */
struct MediumParams
{
    double g = 1e6;           // vacuum Rabi frequency
    double N = 1e8;           // atom count
    double L = 5e-3;          // cell length, m
    double cell_diameter = 200e-6;
    double nu_p = 2.0 * 3.14159265358979323846 * 5e14;
    double gamma_ba = 1e8;    // optical coherence decay
    double gamma_bc = 1e4;    // ground-state coherence decay
    double delta = 0.0;       // one-photon detuning
    double delta_p = 0.0;     // two-photon detuning
    double c = constants::c_vacuum;

    // Population decay rates of the full level scheme. Accepted for
    // bookkeeping only; the reduced dynamics never read them.
    std::optional<double> gamma_a;
    std::optional<double> gamma_c;

    double g2N() const { return g * g * N; }
    double g_sqrtN() const;
    bool on_resonance() const { return delta == 0.0 && delta_p == 0.0; }

    /// (i(delta + delta_p) + gamma_ba)
    cplx optical_rate() const { return {gamma_ba, delta + delta_p}; }
    /// (i delta_p + gamma_bc)
    cplx ground_rate() const { return {gamma_bc, delta_p}; }

    /// Throws invalid_input if any invariant is broken.
    void validate() const;

    bool operator==(const MediumParams&) const = default;
};

struct DipoleSpec
{
    double dipole_moment = 1e-29;   // C m
    double polarization_overlap = 1.0;
    double quantization_volume = 0.0; // m^3

    void validate() const;
    bool operator==(const DipoleSpec&) const = default;
};

/// Cylindrical quantization volume pi (D/2)^2 L.
double cylinder_volume(double length, double diameter);

/// g = (p . e / hbar) sqrt(hbar nu_p / (2 eps0 V)).
double compute_g_from_dipole(const DipoleSpec& spec, double nu_p);

/// Message when the dipole-derived g differs from params.g by more than
/// factor in either direction; empty when they agree.
std::optional<std::string> dipole_consistency_warning(const MediumParams& params, const DipoleSpec& spec,
                                                      double factor = 2.0);

/**
 * Gaussian information pulse A exp(-((z - z0)/w)^2). length_in_medium is the
 * pulse length used by the adiabaticity checks; it defaults to 2 w.
 */
struct PulseSpec
{
    cplx amplitude{0.2, 0.0};
    double center_z = -2e-3;
    double width = 1e-3;
    std::optional<double> length_in_medium;

    double pulse_length() const { return length_in_medium.value_or(2.0 * width); }
    cplx value_at(double z) const;
    void validate() const;

    bool operator==(const PulseSpec&) const = default;
};

} // namespace eitmem
