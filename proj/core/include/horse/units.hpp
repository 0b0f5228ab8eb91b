#pragma once

// Units: energies in MeV, lengths in fm, masses in MeV/c^2.
// Velocities are dimensionless, measured in units of c: v = hbar_c k / mu.

namespace horse {

struct PhysicalConstants {
    static constexpr double hbar_c = 197.3269631;     // MeV fm
    static constexpr double e2 = 1.43996;             // MeV fm, alpha * hbar_c
    static constexpr double nucleon_mass = 938.918;   // MeV/c^2, average nucleon
};

// mu = m_N A1 A2 / (A1 + A2).
double reduced_mass(double a1, double a2, double unit_mass = PhysicalConstants::nucleon_mass);

// k = sqrt(2 mu E) / hbar_c; throws DomainError for E < 0 (closed channel).
double momentum_from_energy(double energy, double mu);
double energy_from_momentum(double k, double mu);

// v/c = hbar_c k / mu.
double velocity(double k, double mu);

// r0 = hbar_c / sqrt(mu hbar_omega).
double oscillator_radius(double hbar_omega, double mu);

// zeta = Z1 Z2 e^2 mu / (hbar_c^2 k).
double sommerfeld_parameter(double z1z2, double mu, double k);

struct Kinematics {
    double energy = 0.0;
    double momentum = 0.0;
    double velocity = 0.0;
    double reduced_mass = 0.0;

    static Kinematics at(double energy, double mu);
};

} // namespace horse
