#pragma once

#include "horse/basis.hpp"
#include "horse/potential.hpp"

#include <Eigen/Dense>

namespace horse {

// Energies closer than this to an eigenvalue are treated as poles of the G matrix.
inline constexpr double pole_guard = 1e-9;  // MeV

inline constexpr double matrix_element_tolerance = 1e-10;  // MeV

// V_{nn'} = int R_n(r) V(r) R_n'(r) r^2 dr for rows from `row` and columns from `col`
// (bases may differ in l and r0). Composite Gauss-Legendre panels on
// [0, max r^cl + 8 r0], halved until the largest change is below tolerance.
// error_estimate, when given, receives the last change.
Eigen::MatrixXd potential_matrix(const OscillatorBasis& row, int n_row, const OscillatorBasis& col, int n_col,
                                 const RadialPotential& v, double tolerance = matrix_element_tolerance,
                                 double* error_estimate = nullptr);

Eigen::MatrixXd potential_matrix(const OscillatorBasis& basis, const RadialPotential& v, int n_max,
                                 double tolerance = matrix_element_tolerance, double* error_estimate = nullptr);

double potential_matrix_element(const OscillatorBasis& basis, const RadialPotential& v, int n, int n_prime);

// sigma_n = sin(pi (n+1)/(N+2)) / (pi (n+1)/(N+2)), n = 0..N.
Eigen::VectorXd lanczos_factors(int n_max);

// V_{nn'} sigma_n sigma_n'.
Eigen::MatrixXd lanczos_smooth(const Eigen::MatrixXd& v, int n_max);

// Eigen-decomposition of H = T + V on oscillator indices [0, N]; immutable.
struct TruncatedHamiltonian {
    OscillatorBasis basis;
    int N = 0;
    Eigen::MatrixXd matrix;        // assembled H, MeV
    Eigen::VectorXd eigenvalues;   // ascending, MeV
    Eigen::MatrixXd eigenvectors;  // column lambda holds gamma_{lambda n}
    double edge = 0.0;             // T_{N,N+1}, MeV
    bool smoothed = false;
};

TruncatedHamiltonian diagonalize(const OscillatorBasis& basis, const RadialPotential& v, int N, bool smoothing = false);

// Decomposition of an already assembled (N+1)x(N+1) matrix.
TruncatedHamiltonian diagonalize_matrix(const OscillatorBasis& basis, const Eigen::MatrixXd& h);

// G_{nN}(E) = -sum_lambda gamma_{lambda n} gamma_{lambda N} / (E_lambda - E) T_{N,N+1}.
// Throws PoleError within pole_guard of an eigenvalue.
double g_matrix_element(const TruncatedHamiltonian& h, int n, double energy);

// G_{nN}(E) for n = 0..N.
Eigen::VectorXd g_column(const TruncatedHamiltonian& h, double energy);

} // namespace horse
