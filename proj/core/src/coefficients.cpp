#include "eitmem/coefficients.hpp"

#include <cmath>
#include <limits>

#include "eitmem/error.hpp"

namespace eitmem {

CoefficientSample CoefficientSample::from_parts(cplx s, cplx w, double t)
{
    CoefficientSample c;
    c.t = t;
    c.s_part = s;
    c.w_part = w;
    c.alpha1 = s.real();
    c.beta = s.imag();
    c.v_g = w.real();
    c.alpha2 = -w.imag();
    return c;
}

CoefficientSample CoefficientSample::from_components(double alpha1, double beta, double alpha2,
                                                     double v_g, double t)
{
    return from_parts({alpha1, beta}, {v_g, -alpha2}, t);
}

namespace {

struct Trig
{
    double sin2, cos2, tan;
};

Trig trig(double theta)
{
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    return {s * s, c * c, s / c};
}

// g^2 N + P sin^2 theta, P = (i(D+Dp)+gba)(iDp+gbc)
cplx denominator(const MediumParams& p, cplx product, double sin2)
{
    const cplx den = p.g2N() + product * sin2;
    require(std::abs(den) > 1e-30 * p.g2N(), ErrorCategory::numerics,
            "singular parameters: A0/B0 denominator vanishes");
    return den;
}

} // namespace

A0B0 a0_b0(double theta, double theta_dot, const MediumParams& params)
{
    const Trig tr = trig(theta);
    const cplx ground = params.ground_rate();
    const cplx product = params.optical_rate() * ground;
    const cplx den = denominator(params, product, tr.sin2);
    const double sin4 = tr.sin2 * tr.sin2;
    // numerator of A0: P tan sin^2 thetadot - (i(D+Dp)+gba)(iDp+gbc)^2 sin^4,
    // the second term is P (iDp+gbc) sin^4
    const cplx a0 = product * (tr.tan * tr.sin2 * theta_dot - ground * sin4) / den;
    const cplx b0 = product * sin4 / den;
    return {a0, b0};
}

cplx bright_ratio(double theta, const MediumParams& params)
{
    const Trig tr = trig(theta);
    const cplx product = params.optical_rate() * params.ground_rate();
    const cplx den = denominator(params, product, tr.sin2);
    return product * tr.tan * tr.sin2 / den;
}

CoefficientSample exponent_integrand(double theta, double theta_dot, const MediumParams& params)
{
    const Trig tr = trig(theta);
    const A0B0 ab = a0_b0(theta, theta_dot, params);
    const cplx s = params.ground_rate() * tr.sin2 + ab.A0;
    const cplx w = params.c * (tr.cos2 + ab.B0);
    return CoefficientSample::from_parts(s, w);
}

CoefficientSample coeffs_high_density(double theta, double theta_dot, const MediumParams& params)
{
    const Trig tr = trig(theta);
    const double sin4 = tr.sin2 * tr.sin2;
    const double g2N = params.g2N();
    const double dsum = params.delta + params.delta_p;
    const double dp = params.delta_p;
    const double gba = params.gamma_ba;
    const double gbc = params.gamma_bc;

    // real and imaginary parts of (i(D+Dp)+gba)(iDp+gbc)
    const double pr = gbc * gba - dp * dsum;
    const double pi = dsum * gbc + dp * gba;
    const double switching = tr.tan * theta_dot - gbc * tr.sin2;

    const double alpha1 = gbc * tr.sin2 + tr.sin2 / g2N * (pr * switching + pi * (dp * tr.sin2));
    const double alpha2 = -params.c * pi * sin4 / g2N;
    const double beta = dp * tr.sin2 + tr.sin2 / g2N * (pi * switching - pr * (dp * tr.sin2));
    const double v_g = params.c * (tr.cos2 + pr * sin4 / g2N);
    return CoefficientSample::from_components(alpha1, beta, alpha2, v_g);
}

double v_g_min(const MediumParams& params)
{
    return params.c * params.gamma_bc * params.gamma_ba / params.g2N();
}

double max_transit_time(const MediumParams& params, double remaining_length)
{
    const double v = v_g_min(params);
    if (v <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return remaining_length / v;
}

double alpha1_slow_light(double theta, double theta_dot, const MediumParams& params, bool unit_sin)
{
    const Trig tr = trig(theta);
    const double rate = params.gamma_bc +
                        params.gamma_bc * params.gamma_ba / params.g2N() * tr.tan * theta_dot;
    return unit_sin ? rate : rate * tr.sin2;
}

} // namespace eitmem
