#pragma once

#include "horse/hamiltonian.hpp"
#include "horse/potential.hpp"
#include "horse/scattering.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace horse {

// Charged-particle scattering through an auxiliary potential cut at b.
struct CoulombProblem {
    RadialPotential nuclear;
    double z1z2 = 0.0;
    double b = 0.0;  // fm
    OscillatorBasis basis;
    int N = 0;
    bool smoothing = false;

    // Message naming both bounds when b lies outside [R_Nucl, r^cl_N), else empty.
    std::optional<std::string> window_violation() const;
};

// V_Nucl + Z1 Z2 e^2/r for r <= b, zero beyond; the jump at b is kept.
// Throws ConfigError when b is outside the validity window.
RadialPotential build_auxiliary_potential(const CoulombProblem& p);

// Same without the window check (b scans).
RadialPotential build_auxiliary_potential_unchecked(const CoulombProblem& p);

// The problem with its auxiliary Hamiltonian diagonalized once.
struct CoulombSystem {
    CoulombProblem problem;
    TruncatedHamiltonian auxiliary;
};

CoulombSystem prepare(const CoulombProblem& p, bool check_window = true);

struct CoulombPhase {
    double delta = 0.0;        // nuclear phase relative to the Coulomb waves, (-pi/2, pi/2]
    double delta_short = 0.0;  // phase of the auxiliary problem
    double sigma = 0.0;        // arg Gamma(1 + l + i zeta)
    double total() const { return delta + sigma; }
};

// Matching of the auxiliary interior wave to cos(delta) F + sin(delta) G at r = b
// through quasi-Wronskians of (j_l, n_l) with (F_l, G_l).
CoulombPhase coulomb_phase_shift(const CoulombSystem& s, double energy);

// Same phase from the auxiliary phase shift alone: tan delta = -[W(j,F) - t W(n,F)]/[W(j,G) - t W(n,G)].
double coulomb_phase_shift_tantan(const CoulombSystem& s, double energy);

// Nuclear phase from a known auxiliary phase at radius b.
double coulomb_phase_from_short(int l, double k, double zeta, double b, double delta_short);

struct CoulombRenormalization {
    double factor = 0.0;       // u(b) / u^Sh(b)
    CoulombPhase phase;
    ScatteringSolution auxiliary;   // coefficients of the auxiliary problem
    std::vector<double> a;          // factor * auxiliary.a
    double zeta = 0.0;
};

// Renormalizes the auxiliary solution so that its interior matches the Coulomb exterior wave.
// Throws DomainError when u^Sh has a node at b.
CoulombRenormalization renormalize(const CoulombSystem& s, double energy, int n_asym = -1);

// (cos delta F + sin delta G)(zeta, kr) / sqrt(v), the r u form of the exterior wave, fm^{-1/2} units as r u.
double coulomb_exterior_wave(int l, double k, double velocity, double zeta, double delta, double r);

struct PlateauPoint {
    double b = 0.0;
    double delta = 0.0;  // continuous along the scan
    bool in_window = true;
};

// delta_l(b) for each radius; one diagonalization per point.
std::vector<PlateauPoint> plateau_scan(const CoulombProblem& templ, double energy, std::span<const double> b_grid);

struct Plateau {
    double b_lo = 0.0;
    double b_hi = 0.0;
    double width = 0.0;
    double value = 0.0;   // mean delta on the plateau
    double spread = 0.0;  // max - min on the plateau
};

// Widest contiguous run of scan points with max - min below `tolerance`.
Plateau detect_plateau(std::span<const PlateauPoint> points, double tolerance = 0.02);

struct Resonance {
    double energy = 0.0;
    double slope = 0.0;  // rad/MeV
};

// Energy of steepest ascent of delta(E) on a uniform grid of n points.
Resonance steepest_ascent(const CoulombSystem& s, double lo, double hi, int n);

} // namespace horse
