#include "horse_cli/run.hpp"

#include "horse/coulomb.hpp"
#include "horse/hamiltonian.hpp"
#include "horse/multichannel.hpp"
#include "horse/oracle.hpp"
#include "horse/pmatrix.hpp"
#include "horse/scattering.hpp"
#include "horse/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace horse::cli {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::size_t at(int i) { return static_cast<std::size_t>(i); }

void stamp(Table& t, const RunConfig& c)
{
    t.note("artifact", "horse");
    t.note("version", artifact_version);
    for (const auto& [k, v] : c.describe())
        t.note(k, v);
}

std::string coefficient_column(int n) { return "a" + std::to_string(n) + "_sq"; }

// Continuity-tracked phases over the rows that succeeded.
std::vector<double> continuous(const std::vector<double>& delta)
{
    std::vector<double> ok;
    for (double d : delta)
        if (!std::isnan(d))
            ok.push_back(d);
    const auto cont = unwrap_phases(ok);
    std::vector<double> out(delta.size(), nan);
    std::size_t j = 0;
    for (std::size_t i = 0; i < delta.size(); ++i)
        if (!std::isnan(delta[i]))
            out[i] = cont[j++];
    return out;
}

std::string status_of(const std::exception& e)
{
    if (dynamic_cast<const PoleError*>(&e))
        return "pole";
    if (dynamic_cast<const ConvergenceError*>(&e))
        return "no-convergence";
    return "domain";
}

int n_asym_for(const RunConfig& c)
{
    int n = default_n_asym(c.N);
    for (int k : c.coefficients)
        n = std::max(n, k + 1);
    return n;
}

struct PointResult {
    std::vector<double> values;
    std::string status = "ok";
};

Table finish(Table t, const std::vector<double>& energies, std::vector<PointResult>& res, int delta_column,
             int* failed)
{
    // delta_column: index inside values whose unwrapped copy is inserted right after it.
    std::vector<double> delta;
    if (delta_column >= 0)
        for (auto& r : res)
            delta.push_back(r.values[at(delta_column)]);
    const auto cont = delta_column >= 0 ? continuous(delta) : std::vector<double>{};
    int bad = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        std::vector<Cell> row{energies[i]};
        for (std::size_t j = 0; j < res[i].values.size(); ++j) {
            row.emplace_back(res[i].values[j]);
            if (static_cast<int>(j) == delta_column)
                row.emplace_back(cont[i]);
        }
        row.emplace_back(res[i].status);
        if (res[i].status != "ok")
            ++bad;
        t.rows.push_back(std::move(row));
    }
    t.note("failed_points", static_cast<double>(bad));
    if (failed)
        *failed = bad;
    return t;
}

Table run_single(const RunConfig& c, int threads, int* failed)
{
    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const TruncatedHamiltonian h = diagonalize(basis, c.potential.build(c.l), c.N, c.smoothing);
    const auto e = c.energy.points();
    const int n_asym = n_asym_for(c);
    std::vector<PointResult> res(e.size());
    parallel_for(static_cast<int>(e.size()), threads, [&](int i) {
        PointResult& r = res[at(i)];
        try {
            const ScatteringSolution s = coefficients(h, e[at(i)], n_asym);
            r.values = {s.k, s.delta};
            for (int n : c.coefficients)
                r.values.push_back(s.a[at(n)] * s.a[at(n)]);
        } catch (const Error& ex) {
            r.status = status_of(ex);
            r.values.assign(2 + c.coefficients.size(), nan);
        }
    });
    Table t;
    stamp(t, c);
    t.note("r0", basis.r0);
    t.note("eigenvalues", std::vector<double>(h.eigenvalues.data(), h.eigenvalues.data() + h.eigenvalues.size()));
    t.columns = {"E", "k", "delta_rad", "delta_continuous"};
    for (int n : c.coefficients)
        t.columns.push_back(coefficient_column(n));
    t.columns.push_back("status");
    return finish(std::move(t), e, res, 1, failed);
}

CoulombProblem coulomb_problem(const RunConfig& c, const OscillatorBasis& basis)
{
    CoulombProblem p;
    p.nuclear = c.potential.build(c.l);
    p.z1z2 = c.z1z2;
    p.b = c.b.value_or(7.0);
    p.basis = basis;
    p.N = c.N;
    p.smoothing = c.smoothing;
    return p;
}

Table run_coulomb(const RunConfig& c, int threads, int* failed)
{
    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const CoulombSystem sys = prepare(coulomb_problem(c, basis));
    const auto e = c.energy.points();
    const int n_asym = n_asym_for(c);
    const std::size_t width = 7 + c.coefficients.size();
    std::vector<PointResult> res(e.size());
    parallel_for(static_cast<int>(e.size()), threads, [&](int i) {
        PointResult& r = res[at(i)];
        const double energy = e[at(i)];
        try {
            const CoulombRenormalization ren = renormalize(sys, energy, n_asym);
            r.values = {ren.auxiliary.k, ren.zeta, ren.phase.delta, ren.phase.delta_short, ren.phase.sigma, ren.factor};
            for (int n : c.coefficients)
                r.values.push_back(ren.a[at(n)] * ren.a[at(n)]);
        } catch (const Error& ex) {
            r.status = status_of(ex);
            r.values.assign(width - 1, nan);
            if (!dynamic_cast<const PoleError*>(&ex)) {
                // A node of the auxiliary wave at b spoils only the renormalization.
                try {
                    const CoulombPhase ph = coulomb_phase_shift(sys, energy);
                    const double k = momentum_from_energy(energy, c.mu);
                    r.values[0] = k;
                    r.values[1] = sommerfeld_parameter(c.z1z2, c.mu, k);
                    r.values[2] = ph.delta;
                    r.values[3] = ph.delta_short;
                    r.values[4] = ph.sigma;
                    r.status = "node-at-b";
                } catch (const Error&) {
                }
            }
        }
    });
    Table t;
    stamp(t, c);
    t.note("r0", basis.r0);
    t.note("r_N_cl", classical_turning_point(basis, c.N));
    t.note("auxiliary_eigenvalues", std::vector<double>(sys.auxiliary.eigenvalues.data(),
                                                        sys.auxiliary.eigenvalues.data() + sys.auxiliary.eigenvalues.size()));
    t.columns = {"E", "k", "zeta", "delta_rad", "delta_continuous", "delta_short", "sigma", "norm_factor"};
    for (int n : c.coefficients)
        t.columns.push_back(coefficient_column(n));
    t.columns.push_back("status");
    return finish(std::move(t), e, res, 2, failed);
}

Table run_multichannel(const RunConfig& c, int threads, int* failed)
{
    const int m = static_cast<int>(c.channels.size());
    std::vector<Channel> ch;
    for (const auto& s : c.channels)
        ch.push_back(s.channel);
    CouplingPotentials v(at(m), std::vector<RadialPotential>(at(m), zero_potential()));
    for (const auto& cs : c.couplings)
        v[at(cs.row)][at(cs.col)] = cs.potential.build(ch[at(cs.row)].l);
    const bool charged = std::any_of(ch.begin(), ch.end(), [](const Channel& x) { return x.z1z2 != 0.0; });

    std::optional<CoupledHamiltonian> h;
    std::optional<MultichannelCoulombSystem> sys;
    if (charged) {
        MultichannelCoulombProblem p;
        p.channels = ch;
        p.nuclear = v;
        for (const auto& s : c.channels)
            p.radii.push_back(*s.b);
        p.smoothing = c.smoothing;
        sys = prepare(p);
    } else {
        h = build_coupled_hamiltonian(ch, v, c.smoothing);
    }
    const CoupledHamiltonian& hh = charged ? sys->auxiliary : *h;

    const auto e = c.energy.points();
    const std::size_t width = at(m) + 2 * at(m) * at(m) + 2;
    std::vector<PointResult> res(e.size());
    parallel_for(static_cast<int>(e.size()), threads, [&](int i) {
        PointResult& r = res[at(i)];
        try {
            ComplexChannelMatrix S;
            double cond = 0.0;
            bool ill = false;
            if (charged) {
                const CoulombSMatrix cs = multichannel_coulomb_s(*sys, e[at(i)]);
                S = cs.S, cond = cs.condition, ill = cs.ill_conditioned;
            } else {
                const SMatrix s = s_matrix(*h, e[at(i)]);
                S = s.S, cond = s.condition, ill = s.ill_conditioned;
            }
            const Eigen::VectorXd ph = eigenphases(S);
            for (int g = 0; g < m; ++g)
                r.values.push_back(ph(g));
            for (int g = 0; g < m; ++g)
                for (int gp = 0; gp < m; ++gp) {
                    r.values.push_back(S(g, gp).real());
                    r.values.push_back(S(g, gp).imag());
                }
            r.values.push_back((S.adjoint() * S - ComplexChannelMatrix::Identity(m, m)).norm());
            r.values.push_back(cond);
            if (ill)
                r.status = "ill-conditioned";
        } catch (const Error& ex) {
            r.status = status_of(ex);
            r.values.assign(width, nan);
        }
    });
    Table t;
    stamp(t, c);
    t.note("route", charged ? "coulomb auxiliary S" : "short-range S");
    t.note("eigenvalues", std::vector<double>(hh.eigenvalues.data(), hh.eigenvalues.data() + hh.eigenvalues.size()));
    t.columns = {"E"};
    for (int g = 1; g <= m; ++g)
        t.columns.push_back("eigenphase_" + std::to_string(g));
    for (int g = 1; g <= m; ++g)
        for (int gp = 1; gp <= m; ++gp) {
            t.columns.push_back("S_re_" + std::to_string(g) + std::to_string(gp));
            t.columns.push_back("S_im_" + std::to_string(g) + std::to_string(gp));
        }
    t.columns.push_back("unitarity_defect");
    t.columns.push_back("condition");
    t.columns.push_back("status");
    return finish(std::move(t), e, res, -1, failed);
}

// Pole energies flagged on the nearest grid row.
std::vector<long long> pole_flags(const std::vector<double>& e, const std::vector<double>& poles)
{
    std::vector<long long> f(e.size(), 0);
    for (double p : poles) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < e.size(); ++i)
            if (std::abs(e[i] - p) < std::abs(e[best] - p))
                best = i;
        if (!e.empty())
            f[best] = 1;
    }
    return f;
}

Table run_pmatrix(const RunConfig& c, int threads, int* failed)
{
    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const TruncatedHamiltonian h = diagonalize(basis, c.potential.build(c.l), c.N, c.smoothing);
    const double b = c.b.value_or(natural_channel_radius(basis, c.N));
    const auto e = c.energy.points();
    std::vector<PointResult> res(e.size());
    parallel_for(static_cast<int>(e.size()), threads, [&](int i) {
        PointResult& r = res[at(i)];
        r.values.assign(3, nan);
        try {
            const PMatrixValue p = p_matrix_general(h, e[at(i)], b);
            r.values[0] = p.P;
        } catch (const PoleError&) {
            // G pole: the discrete analogue diverges here, the exact P stays finite away from it.
            r.status = "pole";
        }
        try {
            const DiscretePMatrix d = p_matrix_discrete(h, e[at(i)]);
            r.values[1] = d.P;
            r.values[2] = d.P_beta;
        } catch (const PoleError&) {
            r.values[1] = r.values[2] = std::numeric_limits<double>::infinity();
        }
    });

    const int n_grid = std::max(400, 4 * c.energy.count);
    const double lo = c.energy.min, hi = c.energy.max;
    const auto exact_poles = locate_poles(
        [&](double x) { return p_matrix_general(h, x, b).R; }, lo, hi, n_grid);
    const auto discrete_poles = locate_poles(
        [&](double x) {
            const DiscretePMatrix d = p_matrix_discrete(h, x);
            return d.pole ? 0.0 : 1.0 / d.P;
        },
        lo, hi, n_grid);
    const auto fe = pole_flags(e, exact_poles);
    const auto fd = pole_flags(e, discrete_poles);

    Table t;
    stamp(t, c);
    t.note("b", b);
    t.note("natural_radius", natural_channel_radius(basis, c.N));
    std::vector<double> eig;
    for (int i = 0; i < h.eigenvalues.size(); ++i)
        eig.push_back(h.eigenvalues(i));
    t.note("eigenvalues", eig);
    t.note("poles_exact", exact_poles);
    t.note("poles_discrete", discrete_poles);
    t.columns = {"E", "P_exact", "P_discrete", "P_beta", "pole_exact", "pole_discrete", "status"};
    int bad = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        t.rows.push_back({e[i], res[i].values[0], res[i].values[1], res[i].values[2], fe[i], fd[i], res[i].status});
        if (res[i].status != "ok")
            ++bad;
    }
    t.note("failed_points", static_cast<double>(bad));
    if (failed)
        *failed = bad;
    return t;
}

Table run_plateau(const RunConfig& c, int* failed)
{
    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const CoulombProblem templ = coulomb_problem(c, basis);
    std::vector<double> grid(at(c.b_count));
    for (int i = 0; i < c.b_count; ++i)
        grid[at(i)] = c.b_min + (c.b_max - c.b_min) * i / (c.b_count - 1.0);
    const auto pts = plateau_scan(templ, c.plateau_energy, grid);
    const Plateau pl = detect_plateau(pts, c.plateau_tolerance);
    Table t;
    stamp(t, c);
    t.note("r_N_cl", classical_turning_point(basis, c.N));
    t.note("range", templ.nuclear.range);
    t.note("plateau_b_lo", pl.b_lo);
    t.note("plateau_b_hi", pl.b_hi);
    t.note("plateau_width", pl.width);
    t.note("plateau_value", pl.value);
    t.note("plateau_spread", pl.spread);
    t.columns = {"b", "delta_rad", "in_window"};
    for (const auto& p : pts)
        t.rows.push_back({p.b, p.delta, static_cast<long long>(p.in_window)});
    if (failed)
        *failed = 0;
    return t;
}

Table run_oracle_compare(const RunConfig& c, int threads, int* failed)
{
    const OscillatorBasis basis = OscillatorBasis::make(c.hbar_omega, c.mu, c.l);
    const RadialPotential pot = c.potential.build(c.l);
    std::optional<CoulombSystem> sys;
    std::optional<TruncatedHamiltonian> h;
    if (c.z1z2 != 0.0)
        sys = prepare(coulomb_problem(c, basis));
    else
        h = diagonalize(basis, pot, c.N, c.smoothing);
    const oracle::OracleProblem op{pot, c.z1z2, c.l, c.mu};
    const oracle::NumerovGrid grid = oracle::NumerovGrid::for_problem(basis.r0, pot.range);
    const auto e = c.energy.points();
    std::vector<PointResult> res(e.size());
    parallel_for(static_cast<int>(e.size()), threads, [&](int i) {
        PointResult& r = res[at(i)];
        r.values.assign(4, nan);
        try {
            const double dh = sys ? coulomb_phase_shift(*sys, e[at(i)]).delta : phase_shift(*h, e[at(i)]);
            const oracle::OracleResult o = oracle::phase_shift(op, e[at(i)], grid);
            r.values = {dh, o.delta, reduce_phase(dh - o.delta), o.error_estimate};
        } catch (const Error& ex) {
            r.status = status_of(ex);
        }
    });
    double worst = 0.0;
    for (const auto& r : res)
        if (r.status == "ok")
            worst = std::max(worst, std::abs(r.values[2]));
    Table t;
    stamp(t, c);
    t.note("max_abs_diff", worst);
    t.columns = {"E", "delta_horse", "delta_oracle", "diff", "oracle_err_est", "status"};
    return finish(std::move(t), e, res, -1, failed);
}

} // namespace

void parallel_for(int n, int threads, const std::function<void(int)>& body)
{
    const int workers = std::clamp(threads, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        first = std::current_exception();
                }
            }
        });
    pool.clear();
    if (first)
        std::rethrow_exception(first);
}

Table compute(const RunConfig& config, int threads, int* failed_points)
{
    switch (config.mode) {
    case Mode::single: return run_single(config, threads, failed_points);
    case Mode::coulomb: return run_coulomb(config, threads, failed_points);
    case Mode::multichannel: return run_multichannel(config, threads, failed_points);
    case Mode::pmatrix_scan: return run_pmatrix(config, threads, failed_points);
    case Mode::plateau_scan: return run_plateau(config, failed_points);
    case Mode::oracle_compare: return run_oracle_compare(config, threads, failed_points);
    }
    throw ConfigError("[run] mode: unsupported");
}

RunReport run(const RunConfig& config, const std::filesystem::path& out_dir, int threads)
{
    RunReport rep;
    const Table t = compute(config, threads, &rep.failed_points);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    const auto path = out_dir / config.output;
    write_table(path, t);
    rep.files.push_back(path);
    return rep;
}

} // namespace horse::cli
