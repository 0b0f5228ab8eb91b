#pragma once

#include "horse/basis.hpp"
#include "horse/potential.hpp"

#include <Eigen/Dense>

#include <vector>

namespace horse::oracle {

// Direct integration of the radial equation; shares only specfun with the oscillator code.

struct NumerovGrid {
    double h = 1e-3;        // fm, nominal step; segments between breakpoints use the nearest smaller even division
    double r_max = 20.0;    // fm
    double r_match = 15.0;  // fm, must lie beyond every breakpoint and below r_max - 2h

    // h = 1e-3 r0, r_match = max(range + 8 fm, 12 fm), r_max = r_match + 3 fm.
    static NumerovGrid for_problem(double r0, double range);
};

// Short-range potential plus a point Coulomb term Z1 Z2 e^2/r added internally.
struct OracleProblem {
    RadialPotential potential;
    double z1z2 = 0.0;
    int l = 0;
    double mu = 0.0;  // MeV/c^2
};

// ubar = r u on the integration nodes, starting with r = 0, ubar = 0.
struct RadialSolution {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<std::size_t> breaks;  // node indices bounding the uniform segments, first 0, last r.size()-1
    double r_match = 0.0;

    // Four-point Lagrange interpolation between nodes.
    double at(double radius) const;
};

// Regular solution with arbitrary normalization; ubar ~ r^{l+1} at the origin.
RadialSolution integrate_radial(const OracleProblem& p, double energy, const NumerovGrid& grid);

struct PhaseExtraction {
    double delta = 0.0;      // (-pi/2, pi/2]
    double amplitude = 0.0;  // ubar = amplitude * (cos delta F + sin delta G)
};

// Matches ubar and its five-point derivative at the node nearest r_m to F_l, G_l (Riccati-Bessel at zeta = 0).
PhaseExtraction extract_phase(const RadialSolution& s, int l, double k, double zeta, double r_m);

struct OracleResult {
    double energy = 0.0;
    double k = 0.0;
    double velocity = 0.0;
    double zeta = 0.0;
    double delta = 0.0;
    double error_estimate = 0.0;  // |delta(h) - delta(h/2)| at the final step
    double h = 0.0;               // step of the reported solution
    // ubar normalized so that ubar -> (cos delta F + sin delta G) / sqrt(v); u = ubar / r.
    RadialSolution wave;
};

// Phase shift with step halving until it changes by less than 1e-6 rad (at most four halvings)
// and a matching-radius check at r_m - 1 fm (ConvergenceError beyond 1e-5 rad).
OracleResult phase_shift(const OracleProblem& p, double energy, const NumerovGrid& grid);

// int ubar R_nl r dr = int u R_nl r^2 dr, Simpson on the uniform segments.
double overlap_coefficient(const RadialSolution& normalized, const OscillatorBasis& basis, int n);

// Bound state with `nodes` interior nodes in (e_lo, e_hi) by bisection on the node count, to 1e-10 MeV.
double bound_state_energy(const OracleProblem& p, int nodes, double e_lo, double e_hi, const NumerovGrid& grid);

// Number of sign changes of ubar on (0, r_max].
int count_nodes(const RadialSolution& s);

struct OracleChannel {
    int l = 0;
    double mu = 0.0;
    double threshold = 0.0;
    double z1z2 = 0.0;
};

struct CoupledOracleResult {
    Eigen::MatrixXcd S;
    double error_estimate = 0.0;  // Frobenius change of S under step halving
};

// Matrix Numerov with M regular columns; S from ubar = h(-) A - h(+) B, S = B A^{-1}, with
// h(+-) = (G +- i F)/sqrt(v) per channel. v[g][g'] couples the channels (g <= g' read, mirrored).
CoupledOracleResult integrate_coupled(const std::vector<OracleChannel>& channels,
                                      const std::vector<std::vector<RadialPotential>>& v, double energy,
                                      const NumerovGrid& grid);

} // namespace horse::oracle
