#include "horse/oracle.hpp"

#include "horse/error.hpp"
#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

namespace horse::oracle {

namespace {

using Mat = Eigen::MatrixXd;

constexpr double phase_step_tolerance = 1e-6;
constexpr double matching_tolerance = 1e-5;
constexpr int max_halvings = 4;

double c_factor(double mu) { return 2.0 * mu / (PhysicalConstants::hbar_c * PhysicalConstants::hbar_c); }

struct Segment {
    double a, b;
    int steps;
    double h() const { return (b - a) / steps; }
};

std::vector<Segment> make_segments(const std::vector<double>& breakpoints, const NumerovGrid& grid)
{
    std::vector<double> edges{0.0};
    std::vector<double> bp = breakpoints;
    std::sort(bp.begin(), bp.end());
    for (double x : bp)
        if (x > edges.back() + 1e-9 && x < grid.r_max - 1e-9)
            edges.push_back(x);
    edges.push_back(grid.r_max);
    if (!(grid.r_match > edges[edges.size() - 2]) || !(grid.r_match < grid.r_max)) {
        std::ostringstream msg;
        msg << "oracle grid: matching radius " << grid.r_match << " fm must lie beyond the last breakpoint "
            << edges[edges.size() - 2] << " fm and below r_max = " << grid.r_max << " fm";
        throw ConfigError(msg.str());
    }
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        int n = static_cast<int>(std::ceil((edges[i + 1] - edges[i]) / grid.h));
        n = std::max(n + (n % 2), 6);
        out.push_back({edges[i], edges[i + 1], n});
    }
    return out;
}

// Coupling function W(r) of ubar'' = W ubar, evaluated on one side of a breakpoint.
using WFunction = std::function<Mat(double)>;

struct Series {
    Eigen::VectorXd a1, a2;
    Eigen::VectorXi l;
};

Mat start_value(const Series& s, double r)
{
    const Eigen::Index m = s.l.size();
    Mat out = Mat::Zero(m, m);
    for (Eigen::Index g = 0; g < m; ++g)
        out(g, g) = std::pow(r, s.l(g) + 1) * (1.0 + s.a1(g) * r + s.a2(g) * r * r);
    return out;
}

struct Propagation {
    std::vector<double> r;
    std::vector<Mat> psi;
    std::vector<std::size_t> breaks;
};

Propagation propagate(const std::vector<Segment>& segments, const WFunction& w, const Series& series)
{
    const Eigen::Index m = series.l.size();
    const Mat id = Mat::Identity(m, m);
    Propagation p;
    p.r.push_back(0.0);
    p.psi.push_back(Mat::Zero(m, m));
    p.breaks.push_back(0);
    for (std::size_t si = 0; si < segments.size(); ++si) {
        const Segment& seg = segments[si];
        const double h = seg.h();
        const double h2 = h * h / 12.0;
        const double inside = 1e-12 * std::max(seg.b, 1.0);
        auto w_at = [&](int i) {
            double r = seg.a + i * h;
            if (i == 0)
                r += inside;
            else if (i == seg.steps)
                r -= inside;
            return w(r);
        };
        Mat w_prev, w_cur, psi_prev, psi_cur;
        if (si == 0) {
            psi_prev = start_value(series, h);
            psi_cur = start_value(series, 2.0 * h);
            p.r.push_back(h);
            p.psi.push_back(psi_prev);
            p.r.push_back(2.0 * h);
            p.psi.push_back(psi_cur);
            w_prev = w_at(1);
            w_cur = w_at(2);
        } else {
            // Restart across a jump: one-sided derivative from the left, Taylor step on the right.
            const std::size_t e = p.psi.size() - 1;
            const double hl = segments[si - 1].h();
            const Mat d = (137.0 * p.psi[e] - 300.0 * p.psi[e - 1] + 300.0 * p.psi[e - 2] - 200.0 * p.psi[e - 3] +
                           75.0 * p.psi[e - 4] - 12.0 * p.psi[e - 5]) / (60.0 * hl);
            const Mat& u = p.psi[e];
            const double eps = 0.25 * h;
            const Mat w0 = w_at(0);
            const Mat w1 = w(seg.a + eps);
            const Mat w2 = w(seg.a + 2.0 * eps);
            const Mat dw = (-3.0 * w0 + 4.0 * w1 - w2) / (2.0 * eps);
            const Mat ddw = (w0 - 2.0 * w1 + w2) / (eps * eps);
            const Mat u2 = w0 * u;
            const Mat u3 = dw * u + w0 * d;
            const Mat u4 = ddw * u + 2.0 * dw * d + w0 * u2;
            psi_prev = u;
            psi_cur = u + h * d + (h * h / 2.0) * u2 + (h * h * h / 6.0) * u3 + (h * h * h * h / 24.0) * u4;
            p.r.push_back(seg.a + h);
            p.psi.push_back(psi_cur);
            w_prev = w0;
            w_cur = w_at(1);
        }
        // Summed form: phi = (1 - h^2 W / 12) psi and its first difference are carried separately, which keeps
        // round-off growth linear in the step count instead of quadratic.
        const int first = si == 0 ? 2 : 1;
        Mat phi = (id - h2 * w_cur) * psi_cur;
        Mat diff = phi - (id - h2 * w_prev) * psi_prev;
        for (int i = first; i < seg.steps; ++i) {
            const Mat w_next = w_at(i + 1);
            diff += (12.0 * h2) * (w_cur * psi_cur);
            phi += diff;
            psi_cur = (id - h2 * w_next).partialPivLu().solve(phi);
            w_cur = w_next;
            p.r.push_back(seg.a + (i + 1) * h);
            p.psi.push_back(psi_cur);
        }
        p.r.back() = seg.b;
        p.breaks.push_back(p.r.size() - 1);
    }
    return p;
}

std::size_t node_near(const std::vector<double>& r, double x)
{
    const auto it = std::lower_bound(r.begin(), r.end(), x);
    std::size_t i = static_cast<std::size_t>(it - r.begin());
    if (i > 0 && (i == r.size() || std::abs(r[i - 1] - x) < std::abs(r[i] - x)))
        --i;
    return i;
}

template <class V>
auto five_point(const V& u, std::size_t i, double h)
{
    return (u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]) / (12.0 * h);
}

void check_matching_node(const std::vector<double>& r, const std::vector<std::size_t>& breaks, std::size_t i)
{
    const std::size_t last_break = breaks[breaks.size() - 2];
    if (i < last_break + 2 || i + 2 >= r.size())
        throw ConfigError("oracle: matching radius needs two uniform nodes on each side");
}

struct CoulombAt {
    double F, G, dF, dG;  // d/drho
};

CoulombAt coulomb_at(int l, double zeta, double rho)
{
    const auto cw = specfun::coulomb_wave(l, zeta, rho);
    return {cw.F, cw.G, cw.dF, cw.dG};
}

} // namespace

NumerovGrid NumerovGrid::for_problem(double r0, double range)
{
    NumerovGrid g;
    g.h = 1e-3 * r0;
    g.r_match = std::max(range + 8.0, 12.0);
    g.r_max = g.r_match + 3.0;
    return g;
}

double RadialSolution::at(double radius) const
{
    if (radius <= 0.0)
        return 0.0;
    if (radius >= r.back())
        return u.back();
    std::size_t i = static_cast<std::size_t>(std::upper_bound(r.begin(), r.end(), radius) - r.begin());
    std::size_t lo = i >= 2 ? i - 2 : 0;
    lo = std::min(lo, r.size() - 4);
    double sum = 0.0;
    for (std::size_t a = lo; a < lo + 4; ++a) {
        double w = 1.0;
        for (std::size_t b = lo; b < lo + 4; ++b)
            if (b != a)
                w *= (radius - r[b]) / (r[a] - r[b]);
        sum += w * u[a];
    }
    return sum;
}

RadialSolution integrate_radial(const OracleProblem& p, double energy, const NumerovGrid& grid)
{
    if (!(p.mu > 0.0) || p.l < 0)
        throw DomainError("integrate_radial: need mu > 0 and l >= 0");
    const double c = c_factor(p.mu);
    const double coul = p.z1z2 * PhysicalConstants::e2;
    const double ll = p.l * (p.l + 1.0);
    WFunction w = [&](double r) {
        Mat m(1, 1);
        m(0, 0) = ll / (r * r) + c * (p.potential(r) + coul / r - energy);
        return m;
    };
    const auto segments = make_segments(p.potential.breakpoints, grid);
    Series s;
    s.l = Eigen::VectorXi::Constant(1, p.l);
    s.a1 = Eigen::VectorXd::Constant(1, c * coul / (2.0 * (p.l + 1.0)));
    const double w0 = c * (p.potential(segments[0].h()) - energy);
    s.a2 = Eigen::VectorXd::Constant(1, (c * coul * s.a1(0) + w0) / (4.0 * p.l + 6.0));
    const Propagation prop = propagate(segments, w, s);
    RadialSolution out;
    out.r = prop.r;
    out.breaks = prop.breaks;
    out.r_match = grid.r_match;
    out.u.reserve(prop.psi.size());
    double peak = 0.0;
    for (const Mat& m : prop.psi) {
        out.u.push_back(m(0, 0));
        peak = std::max(peak, std::abs(m(0, 0)));
    }
    if (!std::isfinite(peak))
        throw ConvergenceError("integrate_radial: solution overflowed");
    return out;
}

PhaseExtraction extract_phase(const RadialSolution& s, int l, double k, double zeta, double r_m)
{
    const std::size_t i = node_near(s.r, r_m);
    check_matching_node(s.r, s.breaks, i);
    const double h = s.r[i + 1] - s.r[i];
    const double u = s.u[i];
    const double du = five_point(s.u, i, h);
    const CoulombAt cw = coulomb_at(l, zeta, k * s.r[i]);
    // u = A(c F + s G), u' = A k (c F' + s G'), with F' G - F G' = 1.
    const double ac = -(u * k * cw.dG - du * cw.G) / k;
    const double as = (u * k * cw.dF - du * cw.F) / k;
    if (ac == 0.0 && as == 0.0)
        throw ConvergenceError("extract_phase: wave vanishes at the matching radius");
    PhaseExtraction out;
    const double raw = std::atan2(as, ac);
    out.delta = std::remainder(raw, 3.141592653589793);
    if (out.delta <= -0.5 * 3.141592653589793)
        out.delta += 3.141592653589793;
    out.amplitude = std::hypot(ac, as) * (std::cos(raw - out.delta) > 0.0 ? 1.0 : -1.0);
    return out;
}

namespace {

OracleResult solve_once(const OracleProblem& p, double energy, const NumerovGrid& grid)
{
    OracleResult out;
    out.energy = energy;
    out.k = momentum_from_energy(energy, p.mu);
    if (!(out.k > 0.0))
        throw DomainError("oracle phase shift needs E > 0");
    out.velocity = velocity(out.k, p.mu);
    out.zeta = sommerfeld_parameter(p.z1z2, p.mu, out.k);
    out.h = grid.h;
    RadialSolution s = integrate_radial(p, energy, grid);
    const PhaseExtraction ph = extract_phase(s, p.l, out.k, out.zeta, grid.r_match);
    const PhaseExtraction near = extract_phase(s, p.l, out.k, out.zeta, grid.r_match - 1.0);
    const double gap = std::abs(std::remainder(ph.delta - near.delta, 3.141592653589793));
    if (gap > matching_tolerance) {
        std::ostringstream msg;
        msg << "oracle: phase shift differs by " << gap << " rad between matching radii " << grid.r_match
            << " and " << grid.r_match - 1.0 << " fm (E = " << energy << " MeV)";
        throw ConvergenceError(msg.str());
    }
    out.delta = ph.delta;
    const double scale = 1.0 / (ph.amplitude * std::sqrt(out.velocity));
    for (double& x : s.u)
        x *= scale;
    out.wave = std::move(s);
    return out;
}

} // namespace

OracleResult phase_shift(const OracleProblem& p, double energy, const NumerovGrid& grid)
{
    OracleResult coarse = solve_once(p, energy, grid);
    NumerovGrid g = grid;
    for (int i = 0; i < max_halvings; ++i) {
        g.h *= 0.5;
        OracleResult fine = solve_once(p, energy, g);
        fine.error_estimate = std::abs(std::remainder(fine.delta - coarse.delta, 3.141592653589793));
        coarse = std::move(fine);
        if (coarse.error_estimate < phase_step_tolerance)
            break;
    }
    return coarse;
}

double overlap_coefficient(const RadialSolution& s, const OscillatorBasis& basis, int n)
{
    if (s.r.back() < classical_turning_point(basis, n) + 3.0 * basis.r0)
        throw ConfigError("overlap_coefficient: wave does not reach far enough beyond the turning point");
    double total = 0.0;
    for (std::size_t b = 0; b + 1 < s.breaks.size(); ++b) {
        const std::size_t i0 = s.breaks[b], i1 = s.breaks[b + 1];
        const double h = (s.r[i1] - s.r[i0]) / static_cast<double>(i1 - i0);
        double sum = 0.0;
        for (std::size_t i = i0; i <= i1; ++i) {
            const double weight = (i == i0 || i == i1) ? 1.0 : ((i - i0) % 2 == 1 ? 4.0 : 2.0);
            sum += weight * s.u[i] * radial_function(basis, n, s.r[i]) * s.r[i];
        }
        total += sum * h / 3.0;
    }
    return total;
}

int count_nodes(const RadialSolution& s)
{
    int nodes = 0;
    double prev = 0.0;
    for (std::size_t i = 1; i < s.u.size(); ++i) {
        if (s.u[i] == 0.0)
            continue;
        if (prev != 0.0 && (s.u[i] < 0.0) != (prev < 0.0))
            ++nodes;
        prev = s.u[i];
    }
    return nodes;
}

double bound_state_energy(const OracleProblem& p, int nodes, double e_lo, double e_hi, const NumerovGrid& grid)
{
    auto count = [&](double e) { return count_nodes(integrate_radial(p, e, grid)); };
    if (count(e_lo) > nodes || count(e_hi) <= nodes) {
        std::ostringstream msg;
        msg << "bound_state_energy: no state with " << nodes << " nodes in [" << e_lo << ", " << e_hi << "] MeV";
        throw ConvergenceError(msg.str());
    }
    while (e_hi - e_lo > 1e-10) {
        const double mid = 0.5 * (e_lo + e_hi);
        if (count(mid) > nodes)
            e_hi = mid;
        else
            e_lo = mid;
    }
    return 0.5 * (e_lo + e_hi);
}

namespace {

Eigen::MatrixXcd coupled_once(const std::vector<OracleChannel>& ch, const std::vector<std::vector<RadialPotential>>& v,
                              double energy, const NumerovGrid& grid)
{
    const Eigen::Index m = static_cast<Eigen::Index>(ch.size());
    std::vector<double> bps;
    for (const auto& row : v)
        for (const auto& pot : row)
            bps.insert(bps.end(), pot.breakpoints.begin(), pot.breakpoints.end());
    const auto segments = make_segments(bps, grid);
    WFunction w = [&](double r) {
        Mat out = Mat::Zero(m, m);
        for (Eigen::Index g = 0; g < m; ++g) {
            const auto& c = ch[static_cast<std::size_t>(g)];
            const double cf = c_factor(c.mu);
            out(g, g) = c.l * (c.l + 1.0) / (r * r) + cf * (c.z1z2 * PhysicalConstants::e2 / r + c.threshold - energy);
            for (Eigen::Index gp = 0; gp < m; ++gp) {
                const auto& pot = g <= gp ? v[static_cast<std::size_t>(g)][static_cast<std::size_t>(gp)]
                                          : v[static_cast<std::size_t>(gp)][static_cast<std::size_t>(g)];
                out(g, gp) += cf * pot(r);
            }
        }
        return out;
    };
    Series s;
    s.l.resize(m), s.a1.resize(m), s.a2.resize(m);
    for (Eigen::Index g = 0; g < m; ++g) {
        const auto& c = ch[static_cast<std::size_t>(g)];
        const double cf = c_factor(c.mu);
        const double coul = cf * c.z1z2 * PhysicalConstants::e2;
        s.l(g) = c.l;
        s.a1(g) = coul / (2.0 * (c.l + 1.0));
        const double w0 = cf * (v[static_cast<std::size_t>(g)][static_cast<std::size_t>(g)](segments[0].h()) +
                                c.threshold - energy);
        s.a2(g) = (coul * s.a1(g) + w0) / (4.0 * c.l + 6.0);
    }
    const Propagation prop = propagate(segments, w, s);
    const std::size_t i = node_near(prop.r, grid.r_match);
    check_matching_node(prop.r, prop.breaks, i);
    const double h = prop.r[i + 1] - prop.r[i];
    const Mat u = prop.psi[i];
    const Mat du = five_point(prop.psi, i, h);
    using cd = std::complex<double>;
    Eigen::MatrixXcd a(m, m), b(m, m);
    for (Eigen::Index g = 0; g < m; ++g) {
        const auto& c = ch[static_cast<std::size_t>(g)];
        const double k = momentum_from_energy(energy - c.threshold, c.mu);
        const double sv = std::sqrt(velocity(k, c.mu));
        const double zeta = sommerfeld_parameter(c.z1z2, c.mu, k);
        const CoulombAt cw = coulomb_at(c.l, zeta, k * prop.r[i]);
        const cd hp = cd(cw.G, cw.F) / sv, hm = cd(cw.G, -cw.F) / sv;
        const cd dhp = k * cd(cw.dG, cw.dF) / sv, dhm = k * cd(cw.dG, -cw.dF) / sv;
        // u = A h- - B h+, u' = A h-' - B h+'.
        const cd det = -hm * dhp + hp * dhm;
        for (Eigen::Index j = 0; j < m; ++j) {
            a(g, j) = (-u(g, j) * dhp + hp * du(g, j)) / det;
            b(g, j) = (hm * du(g, j) - dhm * u(g, j)) / det;
        }
    }
    return a.transpose().partialPivLu().solve(b.transpose()).transpose();
}

} // namespace

CoupledOracleResult integrate_coupled(const std::vector<OracleChannel>& channels,
                                      const std::vector<std::vector<RadialPotential>>& v, double energy,
                                      const NumerovGrid& grid)
{
    if (channels.empty() || v.size() != channels.size())
        throw ConfigError("integrate_coupled: potential table must be M x M");
    for (const auto& c : channels)
        if (!(energy > c.threshold))
            throw ConfigError("integrate_coupled: all channels must be open");
    CoupledOracleResult out;
    out.S = coupled_once(channels, v, energy, grid);
    NumerovGrid g = grid;
    g.h *= 0.5;
    const Eigen::MatrixXcd fine = coupled_once(channels, v, energy, g);
    out.error_estimate = (fine - out.S).norm();
    out.S = fine;
    return out;
}

} // namespace horse::oracle
