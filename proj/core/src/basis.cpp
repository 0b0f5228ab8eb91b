#include "horse/basis.hpp"

#include "horse/error.hpp"
#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <cmath>
#include <numbers>

namespace horse {

namespace {

constexpr double pi = std::numbers::pi;

// exp(log_prefactor) * sqrt(n!/Gamma(n+alpha+1)) L_n^alpha(x) for n = 0..n_max,
// propagated by the normalized Laguerre recurrence with running rescaling.
std::vector<double> scaled_laguerre_sequence(int n_max, double alpha, double x, double log_prefactor)
{
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    double log_scale = log_prefactor;
    double prev = 0.0;
    double cur = std::exp(-0.5 * std::lgamma(alpha + 1.0));
    out[0] = cur * std::exp(log_scale);
    for (int n = 0; n < n_max; ++n) {
        const double next = ((2.0 * n + alpha + 1.0 - x) * cur - std::sqrt(n * (n + alpha)) * prev)
                            / std::sqrt((n + 1.0) * (n + alpha + 1.0));
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(cur), std::abs(prev));
        if (mag > 1e200 || (mag < 1e-200 && mag > 0.0)) {
            const double shift = std::log(mag);
            cur /= mag;
            prev /= mag;
            log_scale += shift;
        }
        out[static_cast<std::size_t>(n) + 1] = cur * std::exp(log_scale);
    }
    return out;
}

void require_positive_k(double k)
{
    if (!(k > 0.0))
        throw DomainError("asymptotic solutions require k > 0");
}

} // namespace

OscillatorBasis OscillatorBasis::make(double hbar_omega, double mu, int l)
{
    if (l < 0)
        throw DomainError("OscillatorBasis: l must be non-negative");
    OscillatorBasis b;
    b.hbar_omega = hbar_omega;
    b.mu = mu;
    b.l = l;
    b.r0 = oscillator_radius(hbar_omega, mu);
    return b;
}

std::vector<double> radial_functions(const OscillatorBasis& basis, int n_max, double r)
{
    if (n_max < 0 || r < 0.0)
        throw DomainError("radial_functions: need n_max >= 0 and r >= 0");
    const double alpha = basis.l + 0.5;
    const double rho = r / basis.r0;
    const double x = rho * rho;
    std::vector<double> out;
    if (r == 0.0) {
        if (basis.l > 0)
            return std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0);
        out = scaled_laguerre_sequence(n_max, alpha, 0.0, 0.5 * std::log(2.0 / std::pow(basis.r0, 3)));
    } else {
        const double log_pref = 0.5 * std::log(2.0 / std::pow(basis.r0, 3)) + basis.l * std::log(rho) - 0.5 * x;
        out = scaled_laguerre_sequence(n_max, alpha, x, log_pref);
    }
    for (std::size_t n = 1; n < out.size(); n += 2)
        out[n] = -out[n];
    return out;
}

double radial_function(const OscillatorBasis& basis, int n, double r)
{
    return radial_functions(basis, n, r).back();
}

double kinetic_diagonal(const OscillatorBasis& basis, int n)
{
    return 0.5 * basis.hbar_omega * (2.0 * n + basis.l + 1.5);
}

double kinetic_offdiagonal(const OscillatorBasis& basis, int n)
{
    return -0.5 * basis.hbar_omega * std::sqrt((n + 1.0) * (n + basis.l + 1.5));
}

Eigen::MatrixXd kinetic_matrix(const OscillatorBasis& basis, int n_max)
{
    if (n_max < 0)
        throw DomainError("kinetic_matrix: n_max must be non-negative");
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        t(n, n) = kinetic_diagonal(basis, n);
        if (n < n_max)
            t(n, n + 1) = t(n + 1, n) = kinetic_offdiagonal(basis, n);
    }
    return t;
}

double regular_solution_direct(const OscillatorBasis& basis, int n, double k)
{
    require_positive_k(k);
    const double v = velocity(k, basis.mu);
    const double q = k * basis.r0;
    const double log_ratio = std::lgamma(n + 1.0) - std::lgamma(n + basis.l + 1.5);
    const double log_pref = 0.5 * (std::log(pi * basis.r0 / v) + log_ratio) + (basis.l + 1) * std::log(q) - 0.5 * q * q;
    return std::exp(log_pref) * specfun::laguerre(n, basis.l + 0.5, q * q);
}

double irregular_solution_direct(const OscillatorBasis& basis, int n, double k)
{
    require_positive_k(k);
    const int l = basis.l;
    const double v = velocity(k, basis.mu);
    const double q = k * basis.r0;
    const double log_ratio = std::lgamma(n + 1.0) - std::lgamma(n + l + 1.5);
    const double log_pref = 0.5 * (std::log(pi * basis.r0 / v) + log_ratio) - l * std::log(q) - 0.5 * q * q;
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    const double kummer = specfun::confluent_hypergeometric(-n - l - 0.5, -l + 0.5, q * q);
    return sign / specfun::gamma(-l + 0.5) * std::exp(log_pref) * kummer;
}

AsymptoticSolutions asymptotic_solutions(const OscillatorBasis& basis, int n_max, double k)
{
    require_positive_k(k);
    if (n_max < 1)
        n_max = 1;
    AsymptoticSolutions out;
    out.k = k;
    out.velocity = velocity(k, basis.mu);
    const double q = k * basis.r0;
    const double alpha = basis.l + 0.5;
    const double log_pref = 0.5 * std::log(pi * basis.r0 / out.velocity) + (basis.l + 1) * std::log(q) - 0.5 * q * q;
    out.S = scaled_laguerre_sequence(n_max, alpha, q * q, log_pref);

    out.C.resize(static_cast<std::size_t>(n_max) + 1);
    out.C[0] = irregular_solution_direct(basis, 0, k);
    out.C[1] = irregular_solution_direct(basis, 1, k);
    const double x = q * q;
    for (int n = 1; n < n_max; ++n) {
        out.C[n + 1] = ((2.0 * n + alpha + 1.0 - x) * out.C[n] - std::sqrt(n * (n + alpha)) * out.C[n - 1])
                       / std::sqrt((n + 1.0) * (n + alpha + 1.0));
    }
    return out;
}

double regular_solution(const OscillatorBasis& basis, int n, double k)
{
    return asymptotic_solutions(basis, n, k).S[static_cast<std::size_t>(n)];
}

double irregular_solution(const OscillatorBasis& basis, int n, double k)
{
    return asymptotic_solutions(basis, n, k).C[static_cast<std::size_t>(n)];
}

double regular_solution_large_n(const OscillatorBasis& basis, int n, double k)
{
    require_positive_k(k);
    const double x = n + 0.5 * basis.l + 0.75;
    const double scale = 2.0 * k * basis.r0 * std::sqrt(basis.r0 / velocity(k, basis.mu)) * std::pow(x, 0.25);
    return scale * specfun::spherical_bessel(basis.l, 2.0 * k * basis.r0 * std::sqrt(x)).j;
}

double irregular_solution_large_n(const OscillatorBasis& basis, int n, double k)
{
    require_positive_k(k);
    const double x = n + 0.5 * basis.l + 0.75;
    const double scale = 2.0 * k * basis.r0 * std::sqrt(basis.r0 / velocity(k, basis.mu)) * std::pow(x, 0.25);
    return -scale * specfun::spherical_bessel(basis.l, 2.0 * k * basis.r0 * std::sqrt(x)).n;
}

double casoratian_constant(const OscillatorBasis& basis, double k)
{
    require_positive_k(k);
    return 0.5 * basis.hbar_omega * k * basis.r0 * basis.r0 / velocity(k, basis.mu);
}

double classical_turning_point(const OscillatorBasis& basis, int n)
{
    return 2.0 * basis.r0 * std::sqrt(n + 0.5 * basis.l + 0.75);
}

} // namespace horse
