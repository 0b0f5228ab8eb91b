#include "horse/pmatrix.hpp"

#include "horse/error.hpp"
#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace horse {

namespace {

constexpr double pi = std::numbers::pi;

PMatrixValue from_fraction(double num, double den)
{
    PMatrixValue v;
    if (std::abs(den) < p_pole_guard) {
        v.pole = true;
        v.P = std::copysign(std::numeric_limits<double>::infinity(), num * (den == 0.0 ? 1.0 : den));
        v.R = den / num;
        return v;
    }
    v.P = num / den;
    v.R = den / num;
    return v;
}

} // namespace

PMatrixValue p_matrix_general(const TruncatedHamiltonian& h, double energy, double b)
{
    if (!(b > 0.0))
        throw DomainError("p_matrix_general: b must be positive");
    const BoundaryData d = boundary_data(h, energy);
    const auto sb = specfun::spherical_bessel(h.basis.l, d.k * b);
    // u ~ A_C j + A_S n up to a constant; derivatives in r carry a factor k.
    const double num = b * d.k * (d.a_c() * sb.dj + d.a_s() * sb.dn);
    const double den = d.a_c() * sb.j + d.a_s() * sb.n;
    return from_fraction(num, den);
}

double p_matrix_from_phase(int l, double k, double b, double delta)
{
    const auto sb = specfun::spherical_bessel(l, k * b);
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    return k * b * (c * sb.dj - s * sb.dn) / (c * sb.j - s * sb.n);
}

PMatrixValue p_matrix_plane_wave(const TruncatedHamiltonian& h, double energy, double b)
{
    if (!(b > 0.0))
        throw DomainError("p_matrix_plane_wave: b must be positive");
    const BoundaryData d = boundary_data(h, energy);
    const double x = d.k * b;
    const double t = std::tan(x - 0.5 * pi * h.basis.l);
    PMatrixValue v = from_fraction(x * (d.a_c() + t * d.a_s()), t * d.a_c() - d.a_s());
    if (!v.pole) {
        v.P -= 1.0;
        v.R = 1.0 / v.P;
    }
    return v;
}

double channel_radius_estimate(const TruncatedHamiltonian& h, double energy, int branch)
{
    const double k = momentum_from_energy(energy, h.basis.mu);
    if (!(k > 0.0))
        throw DomainError("channel_radius_estimate: energy must be positive");
    const AsymptoticSolutions as = asymptotic_solutions(h.basis, h.N + 1, k);
    const double ratio = as.S.back() / as.C.back();
    const double base = 0.5 * pi * h.basis.l / k + std::atan(ratio) / k;
    const double b0 = natural_channel_radius(h.basis, h.N);
    const double shift = std::round((b0 - base) * k / pi);
    return base + (shift + branch) * pi / k;
}

PlaneWaveRootValue p_matrix_plane_wave_root(const TruncatedHamiltonian& h, double energy, int branch)
{
    const BoundaryData d = boundary_data(h, energy);
    PlaneWaveRootValue out;
    out.b = channel_radius_estimate(h, energy, branch);
    const double a = 0.5 * PhysicalConstants::hbar_c;
    const double bracket = d.C_N1 * d.C_N + d.S_N1 * d.S_N - d.g * (d.C_N1 * d.C_N1 + d.S_N1 * d.S_N1);
    out.value.P = -(d.k * out.b * h.edge / a) * bracket - 1.0;
    out.value.R = 1.0 / out.value.P;
    return out;
}

ChannelRadiusSolution solve_channel_radius(const TruncatedHamiltonian& h, double energy, int branch)
{
    const double k = momentum_from_energy(energy, h.basis.mu);
    if (!(k > 0.0))
        throw DomainError("solve_channel_radius: energy must be positive");
    const AsymptoticSolutions as = asymptotic_solutions(h.basis, h.N + 1, k);
    const double s1 = as.S.back();
    const double c1 = as.C.back();
    const int l = h.basis.l;
    auto f = [&](double b) {
        const auto sb = specfun::spherical_bessel(l, k * b);
        return sb.j * c1 + sb.n * s1;
    };
    const double seed = channel_radius_estimate(h, energy, branch);
    // Quarter-period bracket first; otherwise scan outward for the sign change nearest the estimate.
    double lo = std::max(seed - 0.25 * pi / k, 1e-6), hi = seed + 0.25 * pi / k;
    double flo = f(lo), fhi = f(hi);
    bool found = flo * fhi <= 0.0;
    const double step = pi / (16.0 * k);
    for (int m = 1; !found && m <= 48; ++m) {
        const double right_lo = seed + (m - 1) * step, right_hi = seed + m * step;
        const double left_hi = seed - (m - 1) * step, left_lo = seed - m * step;
        if (f(right_lo) * f(right_hi) <= 0.0) {
            lo = right_lo, hi = right_hi, found = true;
        } else if (left_lo > 1e-6 && f(left_lo) * f(left_hi) <= 0.0) {
            lo = left_lo, hi = left_hi, found = true;
        }
        flo = f(lo);
        fhi = f(hi);
    }
    if (!found) {
        std::ostringstream msg;
        msg << "solve_channel_radius: no sign change within three half-periods of the estimate " << seed
            << " fm (E = " << energy << " MeV, residuals " << flo << ", " << fhi << ")";
        throw ConvergenceError(msg.str());
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    ChannelRadiusSolution out;
    out.b = 0.5 * (lo + hi);
    out.branch = branch;
    out.energy = energy;
    const auto sb = specfun::spherical_bessel(l, k * out.b);
    out.residual = std::abs(sb.j / sb.n + s1 / c1);
    return out;
}

double natural_channel_radius(const OscillatorBasis& basis, int N)
{
    if (N < 0)
        throw DomainError("natural_channel_radius: N must be non-negative");
    return classical_turning_point(basis, N + 1);
}

double discrete_beta(const OscillatorBasis& basis, int N, double k)
{
    const double l = basis.l;
    const double pre = std::pow((2.0 * N + l + 3.5) / (2.0 * N + l + 1.5), 0.25);
    return pre * std::cos(2.0 * k * basis.r0 * (std::sqrt(N + 0.5 * l + 1.75) - std::sqrt(N + 0.5 * l + 0.75)));
}

DiscretePMatrix p_matrix_discrete(const TruncatedHamiltonian& h, double energy)
{
    const BoundaryData d = boundary_data(h, energy);
    const double delta = phase_shift(h, energy);
    const double a1 = std::cos(delta) * d.S_N1 + std::sin(delta) * d.C_N1;
    const double a0 = d.g * a1;
    const double l = h.basis.l;
    const int N = h.N;
    DiscretePMatrix out;
    out.beta = discrete_beta(h.basis, N, d.k);
    out.P_beta = 2.0 * std::sqrt((N + 1.0) * (N + l + 1.5)) * (out.beta - d.g) - 1.0;
    if (std::abs(a1) < p_pole_guard) {
        out.pole = true;
        out.P = out.P_bar = std::numeric_limits<double>::infinity();
        return out;
    }
    out.P_bar = (2.0 * N + l + 2.5) * (a1 - a0) / a1;
    out.P = out.P_bar - 1.0;
    return out;
}

std::vector<double> locate_poles(const std::function<double(double)>& reciprocal, double lo, double hi,
                                 int n_grid, double tolerance)
{
    auto eval = [&](double e, bool& at_pole) {
        try {
            at_pole = false;
            return reciprocal(e);
        } catch (const PoleError&) {
            at_pole = true;
            return 0.0;
        }
    };
    std::vector<double> poles;
    const double step = (hi - lo) / n_grid;
    bool hit = false;
    double e_prev = lo;
    double r_prev = eval(e_prev, hit);
    for (int i = 1; i <= n_grid; ++i) {
        const double e_next = lo + i * step;
        const double r_next = eval(e_next, hit);
        if (hit) {
            poles.push_back(e_next);
        } else if (r_prev * r_next < 0.0) {
            double a = e_prev, b = e_next, fa = r_prev;
            double root = 0.0;
            bool exact = false;
            while (b - a > tolerance) {
                const double m = 0.5 * (a + b);
                const double fm = eval(m, hit);
                if (hit || fm == 0.0) {
                    root = m;
                    exact = true;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            if (!exact)
                root = 0.5 * (a + b);
            // A zero of R leaves |R| small; a divergence of R leaves it large.
            bool h1 = false;
            const double r_root = eval(root, h1);
            if (h1 || std::abs(r_root) < std::min(std::abs(r_prev), std::abs(r_next)))
                poles.push_back(root);
        }
        e_prev = e_next;
        r_prev = r_next;
    }
    return poles;
}

} // namespace horse
