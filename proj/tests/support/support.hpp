#pragma once

#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace horse::test {

// Phase difference folded onto (-pi/2, pi/2]: phases are defined modulo pi.
inline double phase_distance(double a, double b)
{
    double d = std::remainder(a - b, std::numbers::pi);
    if (d <= -std::numbers::pi / 2)
        d += std::numbers::pi;
    return std::abs(d);
}

// Closed-form phase shift of V = depth for r < radius: inside u ~ j_l(K r), matched at r = radius.
inline double square_well_phase(int l, double depth, double radius, double mu, double energy)
{
    const double k = momentum_from_energy(energy, mu);
    const double kin = std::sqrt(2.0 * mu * (energy - depth)) / PhysicalConstants::hbar_c;
    const auto in = specfun::spherical_bessel(l, kin * radius);
    const auto out = specfun::spherical_bessel(l, k * radius);
    const double beta = kin * in.dj / in.j;
    const double num = k * out.dj - beta * out.j;
    const double den = k * out.dn - beta * out.n;
    return std::atan(num / den);
}

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace horse::test
