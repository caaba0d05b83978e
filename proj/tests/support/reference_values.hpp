#pragma once

// Reference values printed by tests/oracles/derive.py (mpmath, 40 digits).
// Default medium: g = 1e6, N = 1e8, gamma_ba = 1e8, gamma_bc = 1e4, c = 2.99792458e8,
// control cot(theta) = 5e-4 {1 - tanh(1e5 (t - 30us))/2 + tanh(1e5 (t - 125us))/2} + 1e-5.
namespace ref {

// theta = atan(2000), theta_dot = 0, resonance
inline constexpr double a0_resonant_on = -9.999994900001951e-5;
inline constexpr double b0_resonant_on = 9.999994900001951e-9;

// theta = 1.2, theta_dot = 3e3, delta = 2e6, delta_p = 150
inline constexpr double generic_s_re = 8686.9685693175549;
inline constexpr double generic_s_im = 130.30452723889027;
inline constexpr double generic_w_re = 39363694.013726343;
inline constexpr double generic_w_im = 0.079185169948848582;

// cot(theta) = 1e-5, delta = 2e6, general path
inline constexpr double alpha2_delta2e6_off = -0.059958490388838488;

// profile at t = t1
inline constexpr double alpha1_full_t1 = 10000.000185538336;
inline constexpr double alpha1_slow_t1 = 10000.000285538331;

// integrated exponent over the profile
inline constexpr double exponent_0_30us_s = 0.29999994088085498;
inline constexpr double exponent_0_30us_w = 0.0019735985975153657;
inline constexpr double exponent_0_165us_s = 1.6499998262424094;
inline constexpr double exponent_0_165us_w = 0.0052084924767880335;
inline constexpr double peak_165us = 0.038409988398177281;

// t = 80 us, storage stretch
inline constexpr double psi_peak_80us = 0.089865795917809044;
inline constexpr double e_peak_80us = 9.0019951258687063e-5;
inline constexpr double bright_ratio_80us = 0.00099163099887187261;
inline constexpr double bright_ratio_0us = 1.965548552115015e-5;

inline constexpr double decay_factor_165us = 0.19204990862075411;
inline constexpr double t_transit_max = 0.0016678204759907602;

// L_p = 1 mm, T0 = 53 us
inline constexpr double delta_p_max = 200.33348901419414;
inline constexpr double delta_max = 2003334.8901419414;

// dipole 1e-29 C m, cylinder 5 mm x 200 um, nu_p = 2 pi 5e14
inline constexpr double g_from_dipole = 1034874.1875596632;

} // namespace ref
