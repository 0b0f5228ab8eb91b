#include "horse/specfun.hpp"

#include "horse/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace horse::specfun {

namespace {

constexpr double pi = std::numbers::pi;

// Lanczos coefficients, g = 7, n = 9.
constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

} // namespace

double gamma(double x)
{
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("gamma: pole at non-positive integer argument");
    return std::tgamma(x);
}

double log_gamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

std::complex<double> log_gamma(std::complex<double> z)
{
    if (!(z.real() > 0.0))
        throw DomainError("log_gamma: complex argument must have positive real part");
    const std::complex<double> w = z - 1.0;
    std::complex<double> a = lanczos_c[0];
    for (std::size_t i = 1; i < lanczos_c.size(); ++i)
        a += lanczos_c[i] / (w + static_cast<double>(i));
    const std::complex<double> t = w + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (w + 0.5) * std::log(t) - t + std::log(a);
}

double laguerre(int n, double alpha, double x)
{
    if (n < 0)
        throw DomainError("laguerre: degree must be non-negative");
    double prev = 1.0;
    if (n == 0)
        return prev;
    double cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// j_0 .. j_lmax at x > 0; downward recurrence when x < lmax.
std::vector<double> spherical_j_table(int lmax, double x)
{
    std::vector<double> j(static_cast<std::size_t>(lmax) + 2, 0.0);
    const int top = lmax + 1;
    const double s = std::sin(x), c = std::cos(x);
    if (x >= static_cast<double>(top)) {
        j[0] = s / x;
        j[1] = (s / x - c) / x;
        for (int l = 1; l < top; ++l)
            j[l + 1] = (2.0 * l + 1.0) / x * j[l] - j[l - 1];
        return j;
    }
    const int start = top + 20 + static_cast<int>(std::sqrt(40.0 * (top + 1)));
    double jp1 = 0.0, jl = 1e-30;  // j_{l+1}, j_l at l = start
    for (int l = start; l >= 1; --l) {
        const double jm1 = (2.0 * l + 1.0) / x * jl - jp1;
        jp1 = jl;
        jl = jm1;
        if (l - 1 <= top)
            j[static_cast<std::size_t>(l - 1)] = jl;
        if (std::abs(jl) > 1e250) {
            for (auto& v : j)
                v *= 1e-250;
            jl *= 1e-250;
            jp1 *= 1e-250;
        }
    }
    double exact0;
    if (x < 1e-4)
        exact0 = 1.0 - x * x / 6.0;
    else
        exact0 = s / x;
    double scale;
    if (std::abs(exact0) > 0.1 || x < 1.0) {
        scale = exact0 / j[0];
    } else {
        const double exact1 = (s / x - c) / x;
        scale = exact1 / j[1];
    }
    for (auto& v : j)
        v *= scale;
    return j;
}

} // namespace

double spherical_j(int l, double x)
{
    if (l < 0)
        throw DomainError("spherical_j: l must be non-negative");
    if (x < 0.0)
        throw DomainError("spherical_j: x must be non-negative");
    if (x == 0.0)
        return l == 0 ? 1.0 : 0.0;
    return spherical_j_table(l, x)[static_cast<std::size_t>(l)];
}

SphericalBessel spherical_bessel(int l, double x)
{
    if (l < 0)
        throw DomainError("spherical_bessel: l must be non-negative");
    if (!(x > 0.0))
        throw DomainError("spherical_bessel: x must be positive for n_l");
    const auto j = spherical_j_table(l, x);
    const double s = std::sin(x), c = std::cos(x);
    std::vector<double> n(static_cast<std::size_t>(l) + 2);
    n[0] = -c / x;
    n[1] = -c / (x * x) - s / x;
    for (int m = 1; m <= l; ++m)
        n[m + 1] = (2.0 * m + 1.0) / x * n[m] - n[m - 1];

    SphericalBessel out;
    out.j = j[l];
    out.n = n[l];
    // f_l' = (l/x) f_l - f_{l+1}
    out.dj = l / x * j[l] - j[l + 1];
    out.dn = l / x * n[l] - n[l + 1];
    return out;
}

double confluent_hypergeometric(double a, double b, double z)
{
    if (b <= 0.0 && b == std::floor(b))
        throw DomainError("confluent_hypergeometric: b must not be a non-positive integer");
    constexpr int cap = 20000;
    long double sum = 1.0L, comp = 0.0L, term = 1.0L;
    for (int k = 0; k < cap; ++k) {
        term *= static_cast<long double>(a + k) / static_cast<long double>(b + k)
                * static_cast<long double>(z) / static_cast<long double>(k + 1);
        // Neumaier summation
        const long double t = sum + term;
        if (std::fabs(sum) >= std::fabs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        if (term == 0.0L)
            return static_cast<double>(sum + comp);
        const long double total = sum + comp;
        if (k + 1 > std::abs(a) + std::abs(z) && std::fabs(term) <= 1e-17L * std::fabs(total))
            return static_cast<double>(total);
    }
    std::ostringstream msg;
    msg << "confluent_hypergeometric: series did not converge in " << cap << " terms (a=" << a
        << ", b=" << b << ", z=" << z << ", partial sum=" << static_cast<double>(sum + comp)
        << ", last term=" << static_cast<double>(term) << ")";
    throw ConvergenceError(msg.str());
}

double coulomb_phase(int l, double zeta)
{
    if (l < 0)
        throw DomainError("coulomb_phase: l must be non-negative");
    if (zeta == 0.0)
        return 0.0;
    double sigma = log_gamma(std::complex<double>(1.0, zeta)).imag();
    for (int m = 1; m <= l; ++m)
        sigma += std::atan2(zeta, static_cast<double>(m));
    return sigma;
}

} // namespace horse::specfun
