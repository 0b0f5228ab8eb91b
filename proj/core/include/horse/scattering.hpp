#pragma once

#include "horse/basis.hpp"
#include "horse/hamiltonian.hpp"

#include <span>
#include <vector>

namespace horse {

// Quantities at the truncation edge entering every single-channel formula.
// A_S = S_N - G_NN S_{N+1}, A_C = C_N - G_NN C_{N+1}.
struct BoundaryData {
    double energy = 0.0;
    double k = 0.0;
    double velocity = 0.0;
    double g = 0.0;  // G_NN
    double S_N = 0.0, S_N1 = 0.0;
    double C_N = 0.0, C_N1 = 0.0;

    double a_s() const { return S_N - g * S_N1; }
    double a_c() const { return C_N - g * C_N1; }
};

// Throws DomainError for E <= 0 and PoleError near an eigenvalue.
BoundaryData boundary_data(const TruncatedHamiltonian& h, double energy);

// Maps an angle onto (-pi/2, pi/2].
double reduce_phase(double delta);

// tan delta = -A_S / A_C, reported in (-pi/2, pi/2].
double phase_shift(const TruncatedHamiltonian& h, double energy);

// Removes jumps of pi between consecutive points of an energy sweep.
std::vector<double> unwrap_phases(std::span<const double> phases);

struct ScatteringSolution {
    OscillatorBasis basis;
    double energy = 0.0;
    double k = 0.0;
    double velocity = 0.0;
    double delta = 0.0;             // (-pi/2, pi/2]
    double delta_continuous = 0.0;  // filled by sweeps; equals delta for a single point
    int N = 0;
    // u(r) = sum a_n R_n(r) ~ sin(kr - l pi/2 + delta) / (r sqrt v) for r -> inf.
    std::vector<double> a;          // n in [0, n_asym]
};

int default_n_asym(int N);

// Interior a_n = G_nN a_{N+1} for n <= N, asymptotic a_n = cos(delta) S_n + sin(delta) C_n beyond.
// n_asym < 0 selects default_n_asym(N).
ScatteringSolution coefficients(const TruncatedHamiltonian& h, double energy, int n_asym = -1);

// Asymptotic-region coefficients cos(delta) S_n + sin(delta) C_n for n in [0, n_max].
std::vector<double> asymptotic_coefficients(const OscillatorBasis& basis, double k, double delta, int n_max);

// r sum_{n<=M} a_n R_n(r), fm^{-1/2}.
std::vector<double> reconstruct_wavefunction(const ScatteringSolution& sol, std::span<const double> r, int M);

// Same for an arbitrary coefficient list.
std::vector<double> reconstruct_wavefunction(const OscillatorBasis& basis, std::span<const double> a,
                                             std::span<const double> r, int M);

} // namespace horse
