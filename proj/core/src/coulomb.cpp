#include "horse/coulomb.hpp"

#include "horse/error.hpp"
#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace horse {

namespace {

// Quasi-Wronskians x' y - x y' in rho for x in {j, n} and y in {F/rho, G/rho}.
struct QuasiWronskians {
    double jF, nF, jG, nG;
};

QuasiWronskians quasi_wronskians(int l, double zeta, double rho)
{
    const auto sb = specfun::spherical_bessel(l, rho);
    const auto cw = specfun::coulomb_wave(l, zeta, rho);
    const double f = cw.F / rho;
    const double df = cw.dF / rho - cw.F / (rho * rho);
    const double g = cw.G / rho;
    const double dg = cw.dG / rho - cw.G / (rho * rho);
    return {sb.dj * f - sb.j * df, sb.dn * f - sb.n * df, sb.dj * g - sb.j * dg, sb.dn * g - sb.n * dg};
}

double phase_from_parts(double num, double den)
{
    if (num == 0.0 && den == 0.0)
        throw ConvergenceError("coulomb phase: numerator and denominator both vanish");
    return reduce_phase(std::atan2(num, den));
}

} // namespace

std::optional<std::string> CoulombProblem::window_violation() const
{
    const double upper = classical_turning_point(basis, N);
    if (b < nuclear.range || b >= upper) {
        std::ostringstream msg;
        msg << "channel radius b = " << b << " fm must satisfy R_Nucl = " << nuclear.range
            << " fm <= b < r_N^cl = " << upper << " fm";
        return msg.str();
    }
    return std::nullopt;
}

RadialPotential build_auxiliary_potential_unchecked(const CoulombProblem& p)
{
    if (!(p.b > 0.0))
        throw ConfigError("channel radius b must be positive");
    return truncate(p.nuclear + point_coulomb(p.z1z2), p.b);
}

RadialPotential build_auxiliary_potential(const CoulombProblem& p)
{
    if (auto msg = p.window_violation())
        throw ConfigError(*msg);
    return build_auxiliary_potential_unchecked(p);
}

CoulombSystem prepare(const CoulombProblem& p, bool check_window)
{
    const RadialPotential aux = check_window ? build_auxiliary_potential(p) : build_auxiliary_potential_unchecked(p);
    return {p, diagonalize(p.basis, aux, p.N, p.smoothing)};
}

CoulombPhase coulomb_phase_shift(const CoulombSystem& s, double energy)
{
    const BoundaryData d = boundary_data(s.auxiliary, energy);
    const int l = s.problem.basis.l;
    const double zeta = sommerfeld_parameter(s.problem.z1z2, s.problem.basis.mu, d.k);
    const QuasiWronskians w = quasi_wronskians(l, zeta, d.k * s.problem.b);
    CoulombPhase out;
    out.delta = phase_from_parts(-(d.a_c() * w.jF + d.a_s() * w.nF), d.a_c() * w.jG + d.a_s() * w.nG);
    out.delta_short = phase_from_parts(-d.a_s(), d.a_c());
    out.sigma = specfun::coulomb_phase(l, zeta);
    return out;
}

double coulomb_phase_from_short(int l, double k, double zeta, double b, double delta_short)
{
    const QuasiWronskians w = quasi_wronskians(l, zeta, k * b);
    const double c = std::cos(delta_short);
    const double s = std::sin(delta_short);
    // u^Sh ~ cos j - sin n; dividing by cos gives the j - t n form.
    return phase_from_parts(-(c * w.jF - s * w.nF), c * w.jG - s * w.nG);
}

double coulomb_phase_shift_tantan(const CoulombSystem& s, double energy)
{
    const double delta_short = phase_shift(s.auxiliary, energy);
    const double k = momentum_from_energy(energy, s.problem.basis.mu);
    const double zeta = sommerfeld_parameter(s.problem.z1z2, s.problem.basis.mu, k);
    return coulomb_phase_from_short(s.problem.basis.l, k, zeta, s.problem.b, delta_short);
}

double coulomb_exterior_wave(int l, double k, double velocity, double zeta, double delta, double r)
{
    const auto cw = specfun::coulomb_wave(l, zeta, k * r);
    return (std::cos(delta) * cw.F + std::sin(delta) * cw.G) / std::sqrt(velocity);
}

CoulombRenormalization renormalize(const CoulombSystem& s, double energy, int n_asym)
{
    CoulombRenormalization out;
    out.phase = coulomb_phase_shift(s, energy);
    out.auxiliary = coefficients(s.auxiliary, energy, n_asym);
    const int l = s.problem.basis.l;
    const double k = out.auxiliary.k;
    const double b = s.problem.b;
    out.zeta = sommerfeld_parameter(s.problem.z1z2, s.problem.basis.mu, k);
    const double ds = out.auxiliary.delta;
    const auto sb = specfun::spherical_bessel(l, k * b);
    const double rho = k * b;
    const double u_short = rho * (std::cos(ds) * sb.j - std::sin(ds) * sb.n);
    const auto cw = specfun::coulomb_wave(l, out.zeta, rho);
    const double u_long = std::cos(out.phase.delta) * cw.F + std::sin(out.phase.delta) * cw.G;
    if (std::abs(u_short) < 1e-10 * std::max(1.0, std::abs(u_long))) {
        std::ostringstream msg;
        msg << "renormalize: auxiliary wave has a node at b = " << b << " fm (E = " << energy
            << " MeV); choose a different channel radius";
        throw DomainError(msg.str());
    }
    out.factor = u_long / u_short;
    out.a = out.auxiliary.a;
    for (double& x : out.a)
        x *= out.factor;
    return out;
}

std::vector<PlateauPoint> plateau_scan(const CoulombProblem& templ, double energy, std::span<const double> b_grid)
{
    std::vector<PlateauPoint> out;
    out.reserve(b_grid.size());
    std::vector<double> raw;
    for (double b : b_grid) {
        CoulombProblem p = templ;
        p.b = b;
        PlateauPoint pt;
        pt.b = b;
        pt.in_window = !p.window_violation().has_value();
        raw.push_back(coulomb_phase_shift(prepare(p, false), energy).delta);
        out.push_back(pt);
    }
    const auto cont = unwrap_phases(raw);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].delta = cont[i];
    return out;
}

Plateau detect_plateau(std::span<const PlateauPoint> points, double tolerance)
{
    Plateau best;
    best.width = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        double lo = points[i].delta, hi = points[i].delta;
        std::size_t j = i;
        while (j + 1 < points.size()) {
            const double d = points[j + 1].delta;
            if (std::max(hi, d) - std::min(lo, d) >= tolerance)
                break;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
            ++j;
        }
        const double width = points[j].b - points[i].b;
        if (width > best.width) {
            double sum = 0.0;
            for (std::size_t m = i; m <= j; ++m)
                sum += points[m].delta;
            best = {points[i].b, points[j].b, width, sum / static_cast<double>(j - i + 1), hi - lo};
        }
    }
    if (best.width < 0.0)
        best.width = 0.0;
    return best;
}

Resonance steepest_ascent(const CoulombSystem& s, double lo, double hi, int n)
{
    if (n < 3)
        throw DomainError("steepest_ascent: need at least three grid points");
    std::vector<double> e(static_cast<std::size_t>(n)), raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        e[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1.0);
        raw[static_cast<std::size_t>(i)] = coulomb_phase_shift(s, e[static_cast<std::size_t>(i)]).delta;
    }
    const auto d = unwrap_phases(raw);
    Resonance best{lo, -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        const double slope = (d[i + 1] - d[i]) / (e[i + 1] - e[i]);
        if (slope > best.slope)
            best = {0.5 * (e[i] + e[i + 1]), slope};
    }
    return best;
}

} // namespace horse
