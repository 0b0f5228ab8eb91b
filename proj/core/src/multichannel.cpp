#include "horse/multichannel.hpp"

#include "horse/error.hpp"
#include "horse/hamiltonian.hpp"
#include "horse/scattering.hpp"
#include "horse/specfun.hpp"
#include "horse/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace horse {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Channel functions at one radius: value and d/dr of G(+-) (Coulomb) and H(+-) (zero charge),
// both ~ e^{+-i theta}/(r sqrt v).
struct ChannelWaves {
    cd g_plus, g_minus, dg_plus, dg_minus;
    cd h_plus, h_minus, dh_plus, dh_minus;
};

ChannelWaves channel_waves(const Channel& c, double k, double v, double r)
{
    const double rho = k * r;
    const double norm = 1.0 / (r * std::sqrt(v));
    const auto sb = specfun::spherical_bessel(c.l, rho);
    const double f0 = rho * sb.j, df0 = sb.j + rho * sb.dj;
    const double g0 = -rho * sb.n, dg0 = -(sb.n + rho * sb.dn);
    double f = f0, df = df0, g = g0, dg = dg0;
    if (c.z1z2 != 0.0) {
        const auto cw = specfun::coulomb_wave(c.l, sommerfeld_parameter(c.z1z2, c.mu, k), rho);
        f = cw.F, df = cw.dF, g = cw.G, dg = cw.dG;
    }
    auto value = [&](double a, double b, double sign) { return norm * cd(a, sign * b); };
    auto slope = [&](double a, double da, double b, double db, double sign) {
        return norm * (k * cd(da, sign * db) - cd(a, sign * b) / r);
    };
    ChannelWaves w;
    w.g_plus = value(g, f, 1.0);
    w.g_minus = value(g, f, -1.0);
    w.dg_plus = slope(g, dg, f, df, 1.0);
    w.dg_minus = slope(g, dg, f, df, -1.0);
    w.h_plus = value(g0, f0, 1.0);
    w.h_minus = value(g0, f0, -1.0);
    w.dh_plus = slope(g0, dg0, f0, df0, 1.0);
    w.dh_minus = slope(g0, dg0, f0, df0, -1.0);
    return w;
}

std::vector<ChannelWaves> waves_at(const std::vector<Channel>& channels, double energy, const std::vector<double>& radii)
{
    if (radii.size() != channels.size())
        throw ConfigError("one channel radius per channel is required");
    require_open(channels, energy);
    std::vector<ChannelWaves> out;
    for (std::size_t g = 0; g < channels.size(); ++g) {
        const double k = momentum_from_energy(energy - channels[g].threshold, channels[g].mu);
        out.push_back(channel_waves(channels[g], k, velocity(k, channels[g].mu), radii[g]));
    }
    return out;
}

template <class F>
Eigen::MatrixXcd diag_of(const std::vector<ChannelWaves>& w, F pick)
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(w.size()));
    for (std::size_t g = 0; g < w.size(); ++g)
        m(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(g)) = pick(w[g]);
    return m;
}

double condition_of(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu)
{
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

double condition_of(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu)
{
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

} // namespace

void require_open(const std::vector<Channel>& channels, double energy)
{
    for (std::size_t g = 0; g < channels.size(); ++g)
        if (!(energy > channels[g].threshold)) {
            std::ostringstream msg;
            msg << "channel " << g + 1 << " is closed at E = " << energy << " MeV (threshold "
                << channels[g].threshold << " MeV); only open channels are supported";
            throw ConfigError(msg.str());
        }
}

CoupledHamiltonian diagonalize_coupled(const std::vector<Channel>& channels, const Eigen::MatrixXd& h)
{
    CoupledHamiltonian out;
    out.channels = channels;
    int total = 0;
    for (const Channel& c : channels) {
        if (c.N < 0)
            throw ConfigError("channel truncation N must be non-negative");
        out.bases.push_back(c.basis());
        out.offsets.push_back(total);
        out.edges.push_back(kinetic_offdiagonal(out.bases.back(), c.N));
        total += c.N + 1;
    }
    if (h.rows() != total || h.cols() != total)
        throw DomainError("diagonalize_coupled: matrix size does not match the channel truncations");
    out.matrix = h;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("diagonalize_coupled: symmetric eigensolver failed");
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
    return out;
}

CoupledHamiltonian build_coupled_hamiltonian(const std::vector<Channel>& channels, const CouplingPotentials& v,
                                             bool smoothing)
{
    const std::size_t m = channels.size();
    if (m == 0)
        throw ConfigError("at least one channel is required");
    if (v.size() != m)
        throw ConfigError("coupling potential table must be M x M");
    std::vector<int> offsets;
    int total = 0;
    for (const Channel& c : channels) {
        offsets.push_back(total);
        total += c.N + 1;
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(total, total);
    for (std::size_t g = 0; g < m; ++g) {
        if (v[g].size() != m)
            throw ConfigError("coupling potential table must be M x M");
        const Channel& cg = channels[g];
        const OscillatorBasis bg = cg.basis();
        h.block(offsets[g], offsets[g], cg.N + 1, cg.N + 1) =
            kinetic_matrix(bg, cg.N) + cg.threshold * Eigen::MatrixXd::Identity(cg.N + 1, cg.N + 1);
        for (std::size_t gp = g; gp < m; ++gp) {
            if (!v[g][gp].evaluator)
                continue;
            const Channel& cp = channels[gp];
            Eigen::MatrixXd block = potential_matrix(bg, cg.N, cp.basis(), cp.N, v[g][gp]);
            if (smoothing)
                block = lanczos_factors(cg.N).asDiagonal() * block * lanczos_factors(cp.N).asDiagonal();
            if (gp == g) {
                h.block(offsets[g], offsets[g], cg.N + 1, cg.N + 1) += 0.5 * (block + block.transpose());
            } else {
                h.block(offsets[g], offsets[gp], cg.N + 1, cp.N + 1) = block;
                h.block(offsets[gp], offsets[g], cp.N + 1, cg.N + 1) = block.transpose();
            }
        }
    }
    return diagonalize_coupled(channels, h);
}

Eigen::MatrixXd coupled_g_interior(const CoupledHamiltonian& h, double energy)
{
    for (Eigen::Index i = 0; i < h.eigenvalues.size(); ++i)
        if (std::abs(h.eigenvalues(i) - energy) < pole_guard)
            throw PoleError(static_cast<int>(i), h.eigenvalues(i), energy);
    const Eigen::VectorXd inv = (h.eigenvalues.array() - energy).inverse();
    const int m = h.size();
    Eigen::MatrixXd edge_rows(h.eigenvalues.size(), m);
    for (int g = 0; g < m; ++g)
        edge_rows.col(g) = inv.cwiseProduct(h.eigenvectors.row(h.edge_index(g)).transpose()) * h.edges[idx(g)];
    return -h.eigenvectors * edge_rows;
}

ChannelMatrix coupled_g_matrix(const CoupledHamiltonian& h, double energy)
{
    const Eigen::MatrixXd interior = coupled_g_interior(h, energy);
    ChannelMatrix g(h.size(), h.size());
    for (int r = 0; r < h.size(); ++r)
        g.row(r) = interior.row(h.edge_index(r));
    return g;
}

ChannelEdges channel_edges(const CoupledHamiltonian& h, double energy)
{
    require_open(h.channels, energy);
    const int m = h.size();
    ChannelEdges e;
    e.k.resize(m), e.v.resize(m), e.S_N.resize(m), e.S_N1.resize(m), e.C_N.resize(m), e.C_N1.resize(m);
    for (int g = 0; g < m; ++g) {
        const Channel& c = h.channels[idx(g)];
        e.k(g) = momentum_from_energy(energy - c.threshold, c.mu);
        const AsymptoticSolutions as = asymptotic_solutions(h.bases[idx(g)], c.N + 1, e.k(g));
        e.v(g) = as.velocity;
        e.S_N(g) = as.S[idx(c.N)];
        e.S_N1(g) = as.S[idx(c.N + 1)];
        e.C_N(g) = as.C[idx(c.N)];
        e.C_N1(g) = as.C[idx(c.N + 1)];
    }
    return e;
}

SMatrix s_matrix(const CoupledHamiltonian& h, double energy)
{
    const ChannelEdges e = channel_edges(h, energy);
    const Eigen::MatrixXcd g = coupled_g_matrix(h, energy).cast<cd>();
    const Eigen::VectorXcd cp_n = e.C_N.cast<cd>() + I * e.S_N.cast<cd>();
    const Eigen::VectorXcd cm_n = e.C_N.cast<cd>() - I * e.S_N.cast<cd>();
    const Eigen::VectorXcd cp_n1 = e.C_N1.cast<cd>() + I * e.S_N1.cast<cd>();
    const Eigen::VectorXcd cm_n1 = e.C_N1.cast<cd>() - I * e.S_N1.cast<cd>();
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd(cp_n.asDiagonal()) - g * cp_n1.asDiagonal();
    const Eigen::MatrixXcd rhs = Eigen::MatrixXcd(cm_n.asDiagonal()) - g * cm_n1.asDiagonal();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    SMatrix out;
    out.energy = energy;
    out.S = lu.solve(rhs);
    out.condition = condition_of(lu);
    out.ill_conditioned = out.condition > ill_conditioned_threshold;
    const Eigen::MatrixXcd gt = g.transpose();
    const Eigen::MatrixXcd left = Eigen::MatrixXcd(cm_n.asDiagonal()) - cm_n1.asDiagonal() * gt;
    const Eigen::MatrixXcd right = Eigen::MatrixXcd(cp_n.asDiagonal()) - cp_n1.asDiagonal() * gt;
    // X right^{-1} = (right^{-T} X^T)^T.
    out.S_transposed = right.transpose().partialPivLu().solve(left.transpose()).transpose();
    return out;
}

Eigen::VectorXd eigenphases(const ComplexChannelMatrix& S)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(S);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("eigenphases: eigensolver failed");
    Eigen::VectorXd phases(S.rows());
    for (Eigen::Index i = 0; i < S.rows(); ++i)
        phases(i) = reduce_phase(0.5 * std::arg(solver.eigenvalues()(i)));
    std::sort(phases.data(), phases.data() + phases.size());
    return phases;
}

std::vector<Eigen::MatrixXcd> interior_coefficients(const CoupledHamiltonian& h, double energy,
                                                    const ComplexChannelMatrix& S, int n_asym)
{
    const int m = h.size();
    if (n_asym < 0)
        for (const Channel& c : h.channels)
            n_asym = std::max(n_asym, default_n_asym(c.N));
    require_open(h.channels, energy);
    std::vector<Eigen::MatrixXcd> a;
    for (int g = 0; g < m; ++g) {
        const Channel& c = h.channels[idx(g)];
        if (n_asym < c.N + 1)
            throw DomainError("interior_coefficients: n_asym must exceed every N_g");
        const double k = momentum_from_energy(energy - c.threshold, c.mu);
        const AsymptoticSolutions as = asymptotic_solutions(h.bases[idx(g)], n_asym, k);
        Eigen::MatrixXcd block(n_asym + 1, m);
        for (int n = 0; n <= n_asym; ++n) {
            const cd cplus(as.C[idx(n)], as.S[idx(n)]);
            const cd cminus(as.C[idx(n)], -as.S[idx(n)]);
            for (int i = 0; i < m; ++i)
                block(n, i) = ((g == i ? cminus : cd(0.0)) - S(g, i) * cplus) / (-2.0 * I);
        }
        a.push_back(std::move(block));
    }
    const Eigen::MatrixXcd gint = coupled_g_interior(h, energy).cast<cd>();
    Eigen::MatrixXcd edge(m, m);
    for (int gp = 0; gp < m; ++gp)
        edge.row(gp) = a[idx(gp)].row(h.channels[idx(gp)].N + 1);
    const Eigen::MatrixXcd inner = gint * edge;
    for (int g = 0; g < m; ++g)
        a[idx(g)].topRows(h.channels[idx(g)].N + 1) = inner.middleRows(h.offsets[idx(g)], h.channels[idx(g)].N + 1);
    return a;
}

namespace {

struct PBraces {
    Eigen::MatrixXd num, den;
};

PBraces p_braces(const CoupledHamiltonian& h, double energy, const std::vector<double>& radii)
{
    const int m = h.size();
    if (static_cast<int>(radii.size()) != m)
        throw ConfigError("one channel radius per channel is required");
    const ChannelEdges e = channel_edges(h, energy);
    const Eigen::MatrixXd gt = coupled_g_matrix(h, energy).transpose();
    Eigen::VectorXd f(m), df(m), g(m), dg(m);
    for (int c = 0; c < m; ++c) {
        const double k = e.k(c);
        const auto sb = specfun::spherical_bessel(h.channels[idx(c)].l, k * radii[idx(c)]);
        const double a = k / std::sqrt(e.v(c));
        f(c) = a * sb.j, df(c) = a * k * sb.dj;
        g(c) = -a * sb.n, dg(c) = -a * k * sb.dn;
    }
    auto brace = [&](const Eigen::VectorXd& fv, const Eigen::VectorXd& gv) {
        const Eigen::VectorXd n0 = fv.cwiseProduct(e.C_N) - gv.cwiseProduct(e.S_N);
        const Eigen::VectorXd n1 = fv.cwiseProduct(e.C_N1) - gv.cwiseProduct(e.S_N1);
        return Eigen::MatrixXd(Eigen::MatrixXd(n0.asDiagonal()) - n1.asDiagonal() * gt);
    };
    return {brace(df, dg), brace(f, g)};
}

} // namespace

PMatrixResult multichannel_p_matrix(const CoupledHamiltonian& h, double energy, const std::vector<double>& radii)
{
    const PBraces br = p_braces(h, energy, radii);
    const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(radii.data(), static_cast<Eigen::Index>(radii.size()));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(br.den.transpose());
    PMatrixResult out;
    out.P = b.asDiagonal() * lu.solve(br.num.transpose()).transpose();
    out.condition = condition_of(lu);
    out.ill_conditioned = out.condition > ill_conditioned_threshold;
    out.R = out.P.partialPivLu().inverse();
    return out;
}

double multichannel_p_denominator_det(const CoupledHamiltonian& h, double energy, const std::vector<double>& radii)
{
    return p_braces(h, energy, radii).den.determinant();
}

std::vector<double> multichannel_natural_radii(const std::vector<Channel>& channels)
{
    std::vector<double> b;
    for (const Channel& c : channels)
        b.push_back(classical_turning_point(c.basis(), c.N + 1));
    return b;
}

namespace {

ChannelMatrix discrete_p(const CoupledHamiltonian& h, double energy, bool with_r0)
{
    const int m = h.size();
    const ChannelMatrix g = coupled_g_matrix(h, energy);
    const auto b0 = multichannel_natural_radii(h.channels);
    Eigen::VectorXd x(m), d(m);
    for (int c = 0; c < m; ++c) {
        const Channel& ch = h.channels[idx(c)];
        x(c) = 1.0 / std::sqrt(b0[idx(c)]);
        if (with_r0)
            x(c) /= h.bases[idx(c)].r0;
        d(c) = ch.N + 0.5 * ch.l + 1.25;
    }
    const ChannelMatrix similar = x.asDiagonal() * g * x.cwiseInverse().asDiagonal();
    return 2.0 * d.asDiagonal() * (ChannelMatrix::Identity(m, m) - similar) - ChannelMatrix::Identity(m, m);
}

} // namespace

ChannelMatrix multichannel_discrete_p(const CoupledHamiltonian& h, double energy)
{
    return discrete_p(h, energy, true);
}

ChannelMatrix multichannel_discrete_p_equal_mass(const CoupledHamiltonian& h, double energy)
{
    return discrete_p(h, energy, false);
}

CouplingPotentials auxiliary_potentials(const MultichannelCoulombProblem& p)
{
    const std::size_t m = p.channels.size();
    if (p.radii.size() != m)
        throw ConfigError("one channel radius per channel is required");
    CouplingPotentials out(m, std::vector<RadialPotential>(m));
    for (std::size_t g = 0; g < m; ++g) {
        const OscillatorBasis basis = p.channels[g].basis();
        const double upper = classical_turning_point(basis, p.channels[g].N);
        if (!(p.radii[g] > 0.0) || p.radii[g] >= upper) {
            std::ostringstream msg;
            msg << "channel " << g + 1 << ": radius b = " << p.radii[g] << " fm must satisfy 0 < b < r_N^cl = "
                << upper << " fm";
            throw ConfigError(msg.str());
        }
        for (std::size_t gp = g; gp < m; ++gp) {
            RadialPotential v = p.nuclear[g][gp].evaluator ? p.nuclear[g][gp] : zero_potential();
            if (gp == g && p.channels[g].z1z2 != 0.0)
                v = v + point_coulomb(p.channels[g].z1z2);
            out[g][gp] = truncate(v, std::min(p.radii[g], p.radii[gp]));
        }
    }
    return out;
}

MultichannelCoulombSystem prepare(const MultichannelCoulombProblem& p)
{
    return {p, build_coupled_hamiltonian(p.channels, auxiliary_potentials(p), p.smoothing)};
}

ComplexChannelMatrix exterior_wave_matrix(const std::vector<Channel>& channels, double energy,
                                          const ComplexChannelMatrix& S, const std::vector<double>& radii)
{
    const auto w = waves_at(channels, energy, radii);
    return diag_of(w, [](const ChannelWaves& x) { return x.g_minus; }) -
           diag_of(w, [](const ChannelWaves& x) { return x.g_plus; }) * S;
}

ComplexChannelMatrix auxiliary_wave_matrix(const std::vector<Channel>& channels, double energy,
                                           const ComplexChannelMatrix& S_short, const std::vector<double>& radii)
{
    const auto w = waves_at(channels, energy, radii);
    return diag_of(w, [](const ChannelWaves& x) { return x.h_minus; }) -
           diag_of(w, [](const ChannelWaves& x) { return x.h_plus; }) * S_short;
}

CoulombSMatrix multichannel_coulomb_s(const MultichannelCoulombSystem& s, double energy)
{
    const auto& ch = s.problem.channels;
    const auto& radii = s.problem.radii;
    const int m = static_cast<int>(ch.size());
    const auto w = waves_at(ch, energy, radii);
    CoulombSMatrix out;
    out.S_short = s_matrix(s.auxiliary, energy).S;

    // Route through the auxiliary P-matrix.
    const Eigen::MatrixXcd p = multichannel_p_matrix(s.auxiliary, energy, radii).P.cast<cd>();
    Eigen::VectorXcd binv(m);
    for (int g = 0; g < m; ++g)
        binv(g) = 1.0 / radii[idx(g)];
    const Eigen::MatrixXcd bp = binv.asDiagonal() * p;
    const auto gp = diag_of(w, [](const ChannelWaves& x) { return x.g_plus; });
    const auto gm = diag_of(w, [](const ChannelWaves& x) { return x.g_minus; });
    const auto dgp = diag_of(w, [](const ChannelWaves& x) { return x.dg_plus; });
    const auto dgm = diag_of(w, [](const ChannelWaves& x) { return x.dg_minus; });
    out.S_via_p = (bp * gp - dgp).partialPivLu().solve(bp * gm - dgm);

    // Route through the auxiliary S-matrix: S = D(X1 - X2 S^Sh)(Y1 - Y2 S^Sh)^{-1} D^{-1}, D = [b^2/mu].
    const auto hp = diag_of(w, [](const ChannelWaves& x) { return x.h_plus; });
    const auto hm = diag_of(w, [](const ChannelWaves& x) { return x.h_minus; });
    const auto dhp = diag_of(w, [](const ChannelWaves& x) { return x.dh_plus; });
    const auto dhm = diag_of(w, [](const ChannelWaves& x) { return x.dh_minus; });
    const Eigen::MatrixXcd x1 = hm * dgm - dhm * gm;
    const Eigen::MatrixXcd x2 = hp * dgm - dhp * gm;
    const Eigen::MatrixXcd y1 = hm * dgp - dhm * gp;
    const Eigen::MatrixXcd y2 = hp * dgp - dhp * gp;
    Eigen::VectorXcd d(m);
    for (int g = 0; g < m; ++g)
        d(g) = radii[idx(g)] * radii[idx(g)] / ch[idx(g)].mu;
    const Eigen::MatrixXcd num = d.asDiagonal() * (x1 - x2 * out.S_short);
    const Eigen::MatrixXcd den = d.asDiagonal() * (y1 - y2 * out.S_short);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(den.transpose());
    out.S = lu.solve(num.transpose()).transpose();
    out.condition = condition_of(lu);
    out.ill_conditioned = out.condition > ill_conditioned_threshold;
    return out;
}

ComplexChannelMatrix multichannel_renormalize(const MultichannelCoulombSystem& s, double energy,
                                              const ComplexChannelMatrix& S, const ComplexChannelMatrix& S_short)
{
    const auto& ch = s.problem.channels;
    const auto& radii = s.problem.radii;
    const ComplexChannelMatrix num = -exterior_wave_matrix(ch, energy, S, radii);
    const ComplexChannelMatrix den = -auxiliary_wave_matrix(ch, energy, S_short, radii);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(den.transpose());
    if (condition_of(lu) > ill_conditioned_threshold)
        throw ConvergenceError("multichannel_renormalize: auxiliary wave matrix is singular at the channel radii");
    return lu.solve(num.transpose()).transpose();
}

} // namespace horse
