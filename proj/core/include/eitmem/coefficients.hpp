#pragma once

#include <complex>

#include "eitmem/params.hpp"

namespace eitmem {

struct A0B0
{
    cplx A0; // 1/s
    cplx B0; // dimensionless
};

/**
 * Spectral exponent integrand at one instant. Each Fourier mode of the
 * polariton obeys d/dt Psi_k = -(s + i k w) Psi_k with
 *
 *   s = alpha1 + i beta       (k-independent decay and phase rate)
 *   w = v_g - i alpha2        (group velocity and k-dependent gain)
 */
struct CoefficientSample
{
    double t = 0.0;
    cplx s_part;       // 1/s
    cplx w_part;       // m/s
    double alpha1 = 0; // Re s
    double beta = 0;   // Im s
    double alpha2 = 0; // -Im w
    double v_g = 0;    // Re w

    static CoefficientSample from_parts(cplx s, cplx w, double t = 0.0);
    static CoefficientSample from_components(double alpha1, double beta, double alpha2, double v_g,
                                             double t = 0.0);
};

/// A0 and B0 with the full denominator g^2 N + (i(D+Dp)+gba)(iDp+gbc) sin^2 theta.
A0B0 a0_b0(double theta, double theta_dot, const MediumParams& params);

/// Bright-to-dark amplitude ratio Phi/Psi of the adiabatic bright state.
cplx bright_ratio(double theta, const MediumParams& params);

/// General path: s = (iDp + gbc) sin^2 theta + A0, w = c (cos^2 theta + B0).
CoefficientSample exponent_integrand(double theta, double theta_dot, const MediumParams& params);

/// Closed forms valid when g^2 N dominates |(i(D+Dp)+gba)(iDp+gbc)|.
CoefficientSample coeffs_high_density(double theta, double theta_dot, const MediumParams& params);

/// Resonant slow-light floor of the group velocity, c gbc gba / g^2 N.
double v_g_min(const MediumParams& params);

/// Time for the pulse to cover remaining_length at v_g_min (inf if lossless).
double max_transit_time(const MediumParams& params, double remaining_length);

/**
 * Resonant high-density decay rate
 *   (gbc + gbc gba / g^2N tan(theta) theta_dot) sin^2 theta.
 * With unit_sin the sin^2 factor is dropped (deep slow-light limit).
 */
double alpha1_slow_light(double theta, double theta_dot, const MediumParams& params,
                         bool unit_sin = false);

} // namespace eitmem
