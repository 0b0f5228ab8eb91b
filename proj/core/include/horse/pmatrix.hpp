#pragma once

#include "horse/hamiltonian.hpp"
#include "horse/scattering.hpp"

#include <functional>
#include <vector>

namespace horse {

// Denominators smaller than this mark a pole of P (a value, not a failure).
inline constexpr double p_pole_guard = 1e-12;

struct PMatrixValue {
    double P = 0.0;     // b u'(b)/u(b)
    double R = 0.0;     // 1/P
    bool pole = false;  // |denominator| < p_pole_guard; P is then +-inf
};

// Exact HORSE P-matrix at radius b from the interior G_NN and the free solutions at kb.
PMatrixValue p_matrix_general(const TruncatedHamiltonian& h, double energy, double b);

// b u'/u for u = cos(delta) j_l(kr) - sin(delta) n_l(kr).
double p_matrix_from_phase(int l, double k, double b, double delta);

// Large-kb form: kb (A_C + t A_S)/(t A_C - A_S) - 1 with t = tan(kb - l pi/2).
PMatrixValue p_matrix_plane_wave(const TruncatedHamiltonian& h, double energy, double b);

// Plane-wave form at the radius where tan(kb - l pi/2) = S_{N+1}/C_{N+1}:
// -(kb T/A){C_{N+1}C_N + S_{N+1}S_N - G (C_{N+1}^2 + S_{N+1}^2)} - 1, A = hbar_c/2.
struct PlaneWaveRootValue {
    double b = 0.0;
    PMatrixValue value;
};
PlaneWaveRootValue p_matrix_plane_wave_root(const TruncatedHamiltonian& h, double energy, int branch = 0);

// b_i = l pi/(2k) + arctan(S_{N+1}/C_{N+1})/k + i pi/k, with the arctan branch
// taken so that i = 0 lies nearest the natural radius.
double channel_radius_estimate(const TruncatedHamiltonian& h, double energy, int branch = 0);

struct ChannelRadiusSolution {
    double b = 0.0;
    int branch = 0;
    double energy = 0.0;
    double residual = 0.0;  // |j_l(kb)/n_l(kb) + S_{N+1}/C_{N+1}|
};

// Root of j_l(kb) C_{N+1} + n_l(kb) S_{N+1} = 0 seeded by channel_radius_estimate.
ChannelRadiusSolution solve_channel_radius(const TruncatedHamiltonian& h, double energy, int branch = 0);

// b0 = 2 r0 sqrt(N + l/2 + 7/4), the turning point of R_{N+1}.
double natural_channel_radius(const OscillatorBasis& basis, int N);

struct DiscretePMatrix {
    double P = 0.0;       // (2N+l+5/2)(a_{N+1} - a_N)/a_{N+1} - 1
    double P_bar = 0.0;   // P + 1
    double P_beta = 0.0;  // 2 sqrt((N+1)(N+l+3/2)) (beta - G_NN) - 1
    double beta = 0.0;
    bool pole = false;    // |a_{N+1}| below p_pole_guard
};

// beta = ((2N+l+7/2)/(2N+l+3/2))^{1/4} cos[2 k r0 (sqrt(N+l/2+7/4) - sqrt(N+l/2+3/4))].
double discrete_beta(const OscillatorBasis& basis, int N, double k);

DiscretePMatrix p_matrix_discrete(const TruncatedHamiltonian& h, double energy);

// Zeros of a reciprocal function R(E) = 1/P(E) on [lo, hi]: sign changes on an n_grid
// scan refined by bisection to `tolerance`. Sign changes through a divergence of R are
// rejected. Energies where R throws PoleError are treated as zeros.
std::vector<double> locate_poles(const std::function<double(double)>& reciprocal, double lo, double hi,
                                 int n_grid, double tolerance = 1e-8);

} // namespace horse
