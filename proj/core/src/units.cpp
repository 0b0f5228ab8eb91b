#include "horse/units.hpp"

#include "horse/error.hpp"

#include <cmath>
#include <string>

namespace horse {

PoleError::PoleError(int index, double eigenvalue, double energy)
    : Error("energy " + std::to_string(energy) + " MeV lies within the pole guard of eigenvalue #"
            + std::to_string(index) + " (" + std::to_string(eigenvalue) + " MeV)"),
      index_(index), eigenvalue_(eigenvalue), energy_(energy)
{
}

double reduced_mass(double a1, double a2, double unit_mass)
{
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(unit_mass > 0.0))
        throw DomainError("reduced_mass: mass numbers and unit mass must be positive");
    return unit_mass * a1 * a2 / (a1 + a2);
}

double momentum_from_energy(double energy, double mu)
{
    if (!(mu > 0.0))
        throw DomainError("momentum_from_energy: reduced mass must be positive");
    if (energy < 0.0)
        throw DomainError("closed channel at this energy (E = " + std::to_string(energy) + " MeV)");
    return std::sqrt(2.0 * mu * energy) / PhysicalConstants::hbar_c;
}

double energy_from_momentum(double k, double mu)
{
    const double p = PhysicalConstants::hbar_c * k;
    return p * p / (2.0 * mu);
}

double velocity(double k, double mu)
{
    return PhysicalConstants::hbar_c * k / mu;
}

double oscillator_radius(double hbar_omega, double mu)
{
    if (!(hbar_omega > 0.0) || !(mu > 0.0))
        throw DomainError("oscillator_radius: hbar_omega and mu must be positive");
    return PhysicalConstants::hbar_c / std::sqrt(mu * hbar_omega);
}

double sommerfeld_parameter(double z1z2, double mu, double k)
{
    if (!(k > 0.0))
        throw DomainError("sommerfeld_parameter: k must be positive");
    const double hc = PhysicalConstants::hbar_c;
    return z1z2 * PhysicalConstants::e2 * mu / (hc * hc * k);
}

Kinematics Kinematics::at(double energy, double mu)
{
    Kinematics kin;
    kin.energy = energy;
    kin.reduced_mass = mu;
    kin.momentum = momentum_from_energy(energy, mu);
    kin.velocity = horse::velocity(kin.momentum, mu);
    return kin;
}

} // namespace horse
