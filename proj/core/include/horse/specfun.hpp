#pragma once

#include <complex>

namespace horse::specfun {

// Gamma function for real argument; negative non-integer arguments by reflection.
double gamma(double x);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// Principal log Gamma(z) for Re z > 0 (Lanczos), continuous in Im z.
std::complex<double> log_gamma(std::complex<double> z);

// Generalized Laguerre polynomial L_n^alpha(x) by upward three-term recurrence.
double laguerre(int n, double alpha, double x);

struct SphericalBessel {
    double j = 0.0;
    double n = 0.0;
    double dj = 0.0;  // d j_l / dx
    double dn = 0.0;  // d n_l / dx
};

// j_l, n_l (n_0 = -cos x / x) and x-derivatives; x > 0.
SphericalBessel spherical_bessel(int l, double x);

// j_l(x) alone, valid for x >= 0.
double spherical_j(int l, double x);

// Kummer M(a, b, z) by compensated power series; b must not be a non-positive integer.
double confluent_hypergeometric(double a, double b, double z);

struct CoulombPair {
    double F = 0.0;
    double G = 0.0;
    double dF = 0.0;     // dF/drho
    double dG = 0.0;     // dG/drho
    double phase = 0.0;  // arg Gamma(1 + l + i zeta)
};

// arg Gamma(1 + l + i zeta).
double coulomb_phase(int l, double zeta);

// Regular and irregular Coulomb functions F_l(zeta, rho), G_l(zeta, rho), rho > 0.
// Normalization: dF G - F dG = 1; F ~ sin(theta), G ~ cos(theta) asymptotically,
// theta = rho - zeta ln 2rho - l pi / 2 + phase.
CoulombPair coulomb_wave(int l, double zeta, double rho);

} // namespace horse::specfun
