#pragma once

#include <Eigen/Dense>

#include <vector>

namespace horse {

// Oscillator basis for one partial wave; immutable after construction.
struct OscillatorBasis {
    double hbar_omega = 0.0;  // MeV
    double r0 = 0.0;          // fm, hbar_c / sqrt(mu hbar_omega)
    double mu = 0.0;          // MeV/c^2
    int l = 0;

    static OscillatorBasis make(double hbar_omega, double mu, int l);
};

// R_nl(r) in fm^{-3/2}, sign convention (-1)^n, unit norm with r^2 dr.
double radial_function(const OscillatorBasis& basis, int n, double r);

// R_0l(r) .. R_{n_max,l}(r) at one radius.
std::vector<double> radial_functions(const OscillatorBasis& basis, int n_max, double r);

// T_nn = (hbar_omega/2)(2n + l + 3/2).
double kinetic_diagonal(const OscillatorBasis& basis, int n);

// T_{n,n+1} = -(hbar_omega/2) sqrt((n+1)(n + l + 3/2)).
double kinetic_offdiagonal(const OscillatorBasis& basis, int n);

// Tridiagonal kinetic matrix on indices [0, n_max], MeV.
Eigen::MatrixXd kinetic_matrix(const OscillatorBasis& basis, int n_max);

// Regular and irregular solutions of the free three-term recurrence at momentum k,
// normalized so that sum_n S_n R_n = (k/sqrt v) j_l(kr) and sum_n C_n R_n -> -(k/sqrt v) n_l(kr).
struct AsymptoticSolutions {
    double k = 0.0;
    double velocity = 0.0;  // units of c
    std::vector<double> S;
    std::vector<double> C;
};

AsymptoticSolutions asymptotic_solutions(const OscillatorBasis& basis, int n_max, double k);

double regular_solution(const OscillatorBasis& basis, int n, double k);
double irregular_solution(const OscillatorBasis& basis, int n, double k);

// Closed forms through the Kummer function, used for seeding and cross-checks.
double regular_solution_direct(const OscillatorBasis& basis, int n, double k);
double irregular_solution_direct(const OscillatorBasis& basis, int n, double k);

// Large-n forms: 2 k r0 sqrt(r0/v) x^{1/4} {j_l, -n_l}(2 k r0 sqrt(x)), x = n + l/2 + 3/4. Their large-argument
// limits are sqrt(r0/v) x^{-1/4} {sin, cos}(2 k r0 sqrt(x) - l pi/2).
double regular_solution_large_n(const OscillatorBasis& basis, int n, double k);
double irregular_solution_large_n(const OscillatorBasis& basis, int n, double k);

// T_{n,n+1}(C_{n+1} S_n - C_n S_{n+1}), taken from the large-n limit: (hbar_omega/2) k r0^2 / v.
// With v in units of c this is hbar_c / 2 (MeV fm) for every basis and momentum.
double casoratian_constant(const OscillatorBasis& basis, double k);

// r_n^cl = 2 r0 sqrt(n + l/2 + 3/4).
double classical_turning_point(const OscillatorBasis& basis, int n);

} // namespace horse
