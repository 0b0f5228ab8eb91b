#include "horse/specfun.hpp"

#include "horse/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

namespace horse::specfun {

namespace {

constexpr double cf_eps = 1e-16;
constexpr double tiny = 1e-300;
constexpr int cf1_cap = 1000000;
constexpr int cf2_cap = 200000;

[[noreturn]] void fail(const char* what, int l, double zeta, double rho)
{
    std::ostringstream msg;
    msg << "coulomb_wave: " << what << " (l=" << l << ", zeta=" << zeta << ", rho=" << rho << ")";
    throw ConvergenceError(msg.str());
}

// F'/F by the l-continued fraction; sign carries the sign of F_l.
struct Cf1 {
    double ratio;
    int sign;
};

Cf1 coulomb_cf1(int l, double zeta, double rho)
{
    const double lp = l + 1.0;
    double f = lp / rho + zeta / lp;  // S_{l+1}
    if (f == 0.0)
        f = tiny;
    double c = f, d = 0.0;
    int sign = 1;
    for (int j = 1; j < cf1_cap; ++j) {
        const double L = l + j;
        const double a = -(1.0 + zeta * zeta / (L * L));
        const double b = (2.0 * L + 1.0) * (1.0 / rho + zeta / (L * (L + 1.0)));
        d = b + a * d;
        if (d == 0.0)
            d = tiny;
        c = b + a / c;
        if (c == 0.0)
            c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (d < 0.0)
            sign = -sign;
        if (std::abs(delta - 1.0) < cf_eps)
            return {f, sign};
    }
    fail("CF1 did not converge", l, zeta, rho);
}

// (G' + iF') / (G + iF).
std::complex<double> coulomb_cf2(int l, double zeta, double rho)
{
    using cd = std::complex<double>;
    const cd a(1.0 + l, zeta), b(-static_cast<double>(l), zeta);
    cd f = tiny, c = f, d = 0.0;
    for (int j = 1; j < cf2_cap; ++j) {
        const cd num = (a + static_cast<double>(j - 1)) * (b + static_cast<double>(j - 1));
        const cd den(2.0 * (rho - zeta), 2.0 * j);
        d = den + num * d;
        if (d == 0.0)
            d = tiny;
        c = den + num / c;
        if (c == 0.0)
            c = tiny;
        d = 1.0 / d;
        const cd delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < cf_eps)
            return cd(0.0, 1.0 - zeta / rho) + cd(0.0, 1.0 / rho) * f;
    }
    fail("CF2 did not converge", l, zeta, rho);
}

CoulombPair steed(int l, double zeta, double rho)
{
    const Cf1 cf1 = coulomb_cf1(l, zeta, rho);
    const std::complex<double> pq = coulomb_cf2(l, zeta, rho);
    const double p = pq.real(), q = pq.imag();
    const double gam = (cf1.ratio - p) / q;
    const double F = cf1.sign / std::sqrt(q * (1.0 + gam * gam));
    CoulombPair out;
    out.F = F;
    out.dF = cf1.ratio * F;
    out.G = gam * F;
    out.dG = p * out.G - q * F;
    return out;
}

double coulomb_c(int l, double zeta)
{
    const double x = 2.0 * std::numbers::pi * zeta;
    double c = (x == 0.0) ? 1.0 : std::sqrt(x / std::expm1(x));
    for (int m = 1; m <= l; ++m)
        c *= std::sqrt(m * m + zeta * zeta) / (m * (2.0 * m + 1.0));
    return c;
}

// Regular function by its power series about the origin.
void regular_series(int l, double zeta, double rho, double& F, double& dF)
{
    long double a_prev = 0.0L, a_cur = 1.0L;  // A_{k-1}, A_k starting at k = l+1
    long double pw = std::pow(static_cast<long double>(rho), l + 1);
    long double sum = a_cur * pw, dsum = (l + 1) * a_cur * pw / rho;
    long double biggest = std::fabs(sum);
    for (int k = l + 2; k < 100000; ++k) {
        const long double next = (2.0L * zeta * a_cur - a_prev)
                                 / (static_cast<long double>(k + l) * (k - l - 1));
        a_prev = a_cur;
        a_cur = next;
        pw *= rho;
        const long double term = a_cur * pw;
        sum += term;
        dsum += k * term / rho;
        biggest = std::max(biggest, std::fabs(term));
        if (k > l + 4 && k > 2.0 * rho && std::fabs(term) < 1e-20L * std::fabs(sum)
            && std::fabs(a_prev * pw / rho) < 1e-20L * std::fabs(sum))
            break;
    }
    const double c = coulomb_c(l, zeta);
    F = c * static_cast<double>(sum);
    dF = c * static_cast<double>(dsum);
}

// Irregular function by inward integration from rho_start where (G, G') are known.
void integrate_irregular(int l, double zeta, double rho_start, double G0, double dG0, double rho,
                         double& G, double& dG)
{
    using state = std::array<double, 2>;
    const double ll = l * (l + 1.0);
    auto rhs = [&](const state& y, state& dy, double x) {
        dy[0] = y[1];
        dy[1] = (ll / (x * x) + 2.0 * zeta / x - 1.0) * y[0];
    };
    state y{G0, dG0};
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<state>());
    odeint::integrate_adaptive(stepper, rhs, y, rho_start, rho, -1e-3);
    G = y[0];
    dG = y[1];
}

} // namespace

CoulombPair coulomb_wave(int l, double zeta, double rho)
{
    if (l < 0)
        throw DomainError("coulomb_wave: l must be non-negative");
    if (!(rho > 0.0))
        throw DomainError("coulomb_wave: rho must be positive");

    CoulombPair out;
    if (zeta == 0.0) {
        const SphericalBessel sb = spherical_bessel(l, rho);
        out.F = rho * sb.j;
        out.dF = sb.j + rho * sb.dj;
        out.G = -rho * sb.n;
        out.dG = -(sb.n + rho * sb.dn);
        out.phase = 0.0;
        return out;
    }

    const double turning = zeta + std::sqrt(zeta * zeta + l * (l + 1.0));
    if (rho >= turning) {
        out = steed(l, zeta, rho);
    } else {
        // Classically forbidden side: F from its series, G integrated inward from the turning point.
        const CoulombPair edge = steed(l, zeta, turning);
        regular_series(l, zeta, rho, out.F, out.dF);
        integrate_irregular(l, zeta, turning, edge.G, edge.dG, rho, out.G, out.dG);
    }
    out.phase = coulomb_phase(l, zeta);
    return out;
}

} // namespace horse::specfun
