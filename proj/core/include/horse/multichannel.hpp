#pragma once

#include "horse/basis.hpp"
#include "horse/potential.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace horse {

// One open fragmentation: partial wave, reduced mass, threshold and truncation.
struct Channel {
    int l = 0;
    double mu = 0.0;           // MeV/c^2
    double threshold = 0.0;    // MeV
    double z1z2 = 0.0;
    int N = 0;
    double hbar_omega = 0.0;   // MeV

    OscillatorBasis basis() const { return OscillatorBasis::make(hbar_omega, mu, l); }
};

using ChannelMatrix = Eigen::MatrixXd;
using ComplexChannelMatrix = Eigen::MatrixXcd;

// V[g][g'] for the channel pair; only g <= g' is read and mirrored.
using CouplingPotentials = std::vector<std::vector<RadialPotential>>;

// Throws ConfigError unless E exceeds every threshold.
void require_open(const std::vector<Channel>& channels, double energy);

// Inverses above this condition number are flagged.
inline constexpr double ill_conditioned_threshold = 1e12;

struct CoupledHamiltonian {
    std::vector<Channel> channels;
    std::vector<OscillatorBasis> bases;
    std::vector<int> offsets;      // start of channel g in the concatenated (g, n) index
    Eigen::MatrixXd matrix;
    Eigen::VectorXd eigenvalues;   // ascending, total energies
    Eigen::MatrixXd eigenvectors;  // column lambda holds gamma^g_{lambda n}
    std::vector<double> edges;     // T^g_{N_g, N_g + 1}

    int size() const { return static_cast<int>(channels.size()); }
    int edge_index(int g) const { return offsets[static_cast<std::size_t>(g)] + channels[static_cast<std::size_t>(g)].N; }
};

// Block matrix delta_{gg'}(T^g + eps_g) + V^{gg'} on per-channel indices [0, N_g].
CoupledHamiltonian build_coupled_hamiltonian(const std::vector<Channel>& channels, const CouplingPotentials& v,
                                             bool smoothing = false);

CoupledHamiltonian diagonalize_coupled(const std::vector<Channel>& channels, const Eigen::MatrixXd& h);

// G^{gg'} = -sum_lambda gamma^g_{lambda N_g} gamma^{g'}_{lambda N_g'} / (E_lambda - E) T^{g'}.
ChannelMatrix coupled_g_matrix(const CoupledHamiltonian& h, double energy);

// Rows (g, n) over the concatenated index, columns g': G^{gg'}_{n N_g'}.
Eigen::MatrixXd coupled_g_interior(const CoupledHamiltonian& h, double energy);

// Free solutions at the truncation edges, one entry per channel.
struct ChannelEdges {
    Eigen::VectorXd k, v;
    Eigen::VectorXd S_N, S_N1, C_N, C_N1;
};
ChannelEdges channel_edges(const CoupledHamiltonian& h, double energy);

struct SMatrix {
    double energy = 0.0;
    ComplexChannelMatrix S;             // {C+_N - G C+_{N+1}}^{-1} {C-_N - G C-_{N+1}}
    ComplexChannelMatrix S_transposed;  // {C-_N - C-_{N+1} G^T}{C+_N - C+_{N+1} G^T}^{-1}
    double condition = 0.0;
    bool ill_conditioned = false;
};

SMatrix s_matrix(const CoupledHamiltonian& h, double energy);

// Phases of the eigenvalues e^{2i delta} of a unitary S, ascending, each in (-pi/2, pi/2].
Eigen::VectorXd eigenphases(const ComplexChannelMatrix& S);

// Coefficients of u^(+) in channel g for entrance channel i: column i of result[g],
// rows n in [0, n_asym]. Asymptotic rows are (delta C- - S C+)/(-2i); interior rows follow from G.
std::vector<Eigen::MatrixXcd> interior_coefficients(const CoupledHamiltonian& h, double energy,
                                                    const ComplexChannelMatrix& S, int n_asym = -1);

struct PMatrixResult {
    ChannelMatrix P;
    ChannelMatrix R;
    double condition = 0.0;
    bool ill_conditioned = false;
};

// [P] = [b]{F'C_N - G'S_N - (F'C_{N+1} - G'S_{N+1}) G^T}{F C_N - G S_N - (F C_{N+1} - G S_{N+1}) G^T}^{-1}
// with short-range F = (k/sqrt v) j_l, G = -(k/sqrt v) n_l at r = b_g.
PMatrixResult multichannel_p_matrix(const CoupledHamiltonian& h, double energy, const std::vector<double>& radii);

// det of the second brace, whose zeros are the poles of [P].
double multichannel_p_denominator_det(const CoupledHamiltonian& h, double energy, const std::vector<double>& radii);

std::vector<double> multichannel_natural_radii(const std::vector<Channel>& channels);

// 2[N + l/2 + 5/4](1 - [b0]^{-1/2}[r0]^{-1} G [r0][b0]^{1/2}) - 1.
ChannelMatrix multichannel_discrete_p(const CoupledHamiltonian& h, double energy);

// Same without the [r0] similarity, valid for equal reduced masses.
ChannelMatrix multichannel_discrete_p_equal_mass(const CoupledHamiltonian& h, double energy);

// Coulomb channels through a cut auxiliary potential.
struct MultichannelCoulombProblem {
    std::vector<Channel> channels;
    CouplingPotentials nuclear;
    std::vector<double> radii;  // b_g
    bool smoothing = false;
};

// V^Sh_{gg'} = V^Nucl_{gg'} + delta_{gg'} Z1Z2 e^2/r, cut beyond min(b_g, b_g').
CouplingPotentials auxiliary_potentials(const MultichannelCoulombProblem& p);

struct MultichannelCoulombSystem {
    MultichannelCoulombProblem problem;
    CoupledHamiltonian auxiliary;
};

MultichannelCoulombSystem prepare(const MultichannelCoulombProblem& p);

struct CoulombSMatrix {
    ComplexChannelMatrix S;        // from the auxiliary S-matrix
    ComplexChannelMatrix S_via_p;  // from the auxiliary P-matrix
    ComplexChannelMatrix S_short;  // auxiliary S-matrix
    double condition = 0.0;
    bool ill_conditioned = false;
};

CoulombSMatrix multichannel_coulomb_s(const MultichannelCoulombSystem& s, double energy);

// Exterior channel functions with the Coulomb asymptotics: [G-] - [G+][S] at r_g = radii_g.
// G(+-)_g = (G_l +- i F_l)(zeta_g, k_g r) / (r sqrt v_g).
ComplexChannelMatrix exterior_wave_matrix(const std::vector<Channel>& channels, double energy,
                                          const ComplexChannelMatrix& S, const std::vector<double>& radii);

// Same with the zero-charge functions H(+-) for the auxiliary problem.
ComplexChannelMatrix auxiliary_wave_matrix(const std::vector<Channel>& channels, double energy,
                                           const ComplexChannelMatrix& S_short, const std::vector<double>& radii);

// [N] = {[G+][S] - [G-]}{[H+][S^Sh] - [H-]}^{-1} at the channel radii; [u] = [N][u^Sh] inside.
ComplexChannelMatrix multichannel_renormalize(const MultichannelCoulombSystem& s, double energy,
                                              const ComplexChannelMatrix& S, const ComplexChannelMatrix& S_short);

} // namespace horse
