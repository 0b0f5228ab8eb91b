#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace horse {

// Local radial potential V(r) in MeV, r in fm.
struct RadialPotential {
    std::function<double(double)> evaluator;
    double range = 0.0;               // R_Nucl: beyond it the short-range part is negligible
    std::vector<double> breakpoints;  // radii where V or its derivatives jump

    double operator()(double r) const { return evaluator ? evaluator(r) : 0.0; }
};

RadialPotential zero_potential();
RadialPotential constant_potential(double value);

// depth (negative attracts) for r < radius, zero outside.
RadialPotential square_well(double depth, double radius);

// mu omega^2 r^2 / 2 with hbar_omega in MeV.
RadialPotential harmonic_potential(double mu, double hbar_omega);

struct WoodsSaxonParams {
    double depth = -53.0;       // MeV
    double radius = 0.0;        // fm
    double diffuseness = 0.65;  // fm
    double spin_orbit = 15.0;   // MeV fm^2, surface form on the same geometry

    // radius = 1.25 A^{1/3}.
    static WoodsSaxonParams for_mass_number(double a);
};

// Central Woods-Saxon plus lambda (1/r) df/dr <l.s> when j is given (j = l +- 1/2).
// Range: radius + 4 diffuseness, where the tail is e^-4 of the depth.
RadialPotential woods_saxon(const WoodsSaxonParams& p, int l, std::optional<double> j = std::nullopt);

// Z1 Z2 e^2 / r.
RadialPotential point_coulomb(double z1z2);

RadialPotential operator+(const RadialPotential& a, const RadialPotential& b);

// V(r) for r <= radius, zero beyond; the jump at radius is kept.
RadialPotential truncate(const RadialPotential& v, double radius);

// Two-column (r, V) table, cubic interpolation, zero beyond the last node and
// flat below the first node.
RadialPotential tabulated_potential(std::vector<double> r, std::vector<double> v);
RadialPotential load_tabulated_potential(const std::string& path);

} // namespace horse
