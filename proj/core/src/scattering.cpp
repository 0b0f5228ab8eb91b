#include "horse/scattering.hpp"

#include "horse/error.hpp"
#include "horse/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace horse {

namespace {

constexpr double degenerate_threshold = 1e-14;

} // namespace

BoundaryData boundary_data(const TruncatedHamiltonian& h, double energy)
{
    if (!(energy > 0.0))
        throw DomainError("scattering energy must be positive");
    BoundaryData d;
    d.energy = energy;
    d.k = momentum_from_energy(energy, h.basis.mu);
    d.g = g_matrix_element(h, h.N, energy);
    const AsymptoticSolutions as = asymptotic_solutions(h.basis, h.N + 1, d.k);
    d.velocity = as.velocity;
    d.S_N = as.S[static_cast<std::size_t>(h.N)];
    d.S_N1 = as.S[static_cast<std::size_t>(h.N + 1)];
    d.C_N = as.C[static_cast<std::size_t>(h.N)];
    d.C_N1 = as.C[static_cast<std::size_t>(h.N + 1)];
    return d;
}

double reduce_phase(double delta)
{
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(delta, pi);
    if (r <= -0.5 * pi)
        r += pi;
    return r;
}

double phase_shift(const TruncatedHamiltonian& h, double energy)
{
    const BoundaryData d = boundary_data(h, energy);
    const double num = -d.a_s();
    const double den = d.a_c();
    if (std::abs(num) < degenerate_threshold && std::abs(den) < degenerate_threshold)
        throw ConvergenceError("phase_shift: numerator and denominator both vanish");
    return reduce_phase(std::atan2(num, den));
}

std::vector<double> unwrap_phases(std::span<const double> phases)
{
    std::vector<double> out(phases.begin(), phases.end());
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double step = phases[i] - phases[i - 1];
        offset -= std::numbers::pi * std::round(step / std::numbers::pi);
        out[i] = phases[i] + offset;
    }
    return out;
}

int default_n_asym(int N) { return std::max(2 * N, 50); }

std::vector<double> asymptotic_coefficients(const OscillatorBasis& basis, double k, double delta, int n_max)
{
    const AsymptoticSolutions as = asymptotic_solutions(basis, n_max, k);
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    std::vector<double> a(static_cast<std::size_t>(n_max) + 1);
    for (std::size_t n = 0; n < a.size(); ++n)
        a[n] = c * as.S[n] + s * as.C[n];
    return a;
}

ScatteringSolution coefficients(const TruncatedHamiltonian& h, double energy, int n_asym)
{
    if (n_asym < 0)
        n_asym = default_n_asym(h.N);
    if (n_asym < h.N + 1)
        throw DomainError("coefficients: n_asym must be at least N+1");
    ScatteringSolution sol;
    sol.basis = h.basis;
    sol.energy = energy;
    sol.N = h.N;
    sol.delta = phase_shift(h, energy);
    sol.delta_continuous = sol.delta;
    sol.k = momentum_from_energy(energy, h.basis.mu);
    sol.velocity = velocity(sol.k, h.basis.mu);
    sol.a = asymptotic_coefficients(h.basis, sol.k, sol.delta, n_asym);
    const Eigen::VectorXd g = g_column(h, energy);
    const double edge = sol.a[static_cast<std::size_t>(h.N + 1)];
    for (int n = 0; n <= h.N; ++n)
        sol.a[static_cast<std::size_t>(n)] = g(n) * edge;
    return sol;
}

std::vector<double> reconstruct_wavefunction(const OscillatorBasis& basis, std::span<const double> a,
                                             std::span<const double> r, int M)
{
    if (M < 0 || static_cast<std::size_t>(M) >= a.size())
        throw DomainError("reconstruct_wavefunction: M must lie in [0, n_asym]");
    std::vector<double> u(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto rn = radial_functions(basis, M, r[i]);
        double sum = 0.0;
        for (int n = 0; n <= M; ++n)
            sum += a[static_cast<std::size_t>(n)] * rn[static_cast<std::size_t>(n)];
        u[i] = r[i] * sum;
    }
    return u;
}

std::vector<double> reconstruct_wavefunction(const ScatteringSolution& sol, std::span<const double> r, int M)
{
    return reconstruct_wavefunction(sol.basis, sol.a, r, M);
}

} // namespace horse
