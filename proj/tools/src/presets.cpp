#include "horse_cli/run.hpp"

#include "horse/coulomb.hpp"
#include "horse/hamiltonian.hpp"
#include "horse/oracle.hpp"
#include "horse/pmatrix.hpp"
#include "horse/scattering.hpp"
#include "horse/units.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace horse::cli {

namespace {

// Defaults shared by every preset: A = 15 kinematics, hbar_omega = 18 MeV, b = 7 fm.
constexpr double preset_hbar_omega = 18.0;
constexpr double preset_b = 7.0;
constexpr double proton_charge_product = 7.0;  // p + 15N
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::size_t at(int i) { return static_cast<std::size_t>(i); }

double preset_mu() { return reduced_mass(1.0, 15.0); }

std::vector<double> uniform(double lo, double hi, double step)
{
    std::vector<double> x;
    const int n = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 0; i <= n; ++i)
        x.push_back(lo + i * step);
    return x;
}

Table preset_table(const std::string& name, const std::string& what)
{
    Table t;
    t.note("artifact", "horse");
    t.note("version", artifact_version);
    t.note("preset", name);
    t.note("content", what);
    t.note("mu", preset_mu());
    t.note("hbar_omega", preset_hbar_omega);
    return t;
}

void note_woods_saxon(Table& t)
{
    const WoodsSaxonParams p = WoodsSaxonParams::for_mass_number(15.0);
    t.note("woods_saxon.depth", p.depth);
    t.note("woods_saxon.radius", p.radius);
    t.note("woods_saxon.diffuseness", p.diffuseness);
    t.note("woods_saxon.spin_orbit", p.spin_orbit);
}

RadialPotential nuclear(int l, std::optional<double> j)
{
    return woods_saxon(WoodsSaxonParams::for_mass_number(15.0), l, j);
}

std::string jname(double j) { return std::to_string(static_cast<int>(std::lround(2 * j))) + "_2"; }

// Relative deviation (b0 - b)/b of the natural radius from the exact root, free kinematics only.
RunReport fig1(const std::filesystem::path& dir)
{
    const std::vector<int> ls{0, 1, 4};
    const std::vector<int> ns{0, 1, 3, 9};
    const auto e = uniform(1.0, 30.0, 0.5);
    Table t = preset_table("fig1", "(b0 - b)/b versus E for several N and l");
    t.columns = {"E"};
    std::vector<std::vector<double>> cols;
    for (int l : ls)
        for (int n : ns) {
            t.columns.push_back("dev_l" + std::to_string(l) + "_N" + std::to_string(n));
            const OscillatorBasis basis = OscillatorBasis::make(preset_hbar_omega, preset_mu(), l);
            const TruncatedHamiltonian h = diagonalize(basis, zero_potential(), n);
            const double b0 = natural_channel_radius(basis, n);
            std::vector<double> c;
            for (double x : e) {
                const double b = solve_channel_radius(h, x).b;
                c.push_back((b0 - b) / b);
            }
            cols.push_back(std::move(c));
        }
    double worst = 0.0;
    for (double d : cols[0])
        worst = std::max(worst, std::abs(d));
    t.note("max_abs_dev_l0_N0", worst);
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::vector<Cell> row{e[i]};
        for (const auto& c : cols)
            row.emplace_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    const auto path = dir / "fig1.csv";
    write_table(path, t);
    return {{path}, 0};
}

RunReport fig2(const std::filesystem::path& dir, int threads)
{
    RunReport rep;
    for (int n : {1, 9}) {
        RunConfig c;
        c.mode = Mode::pmatrix_scan;
        c.N = n;
        c.energy = {0.2, 30.0, 597, false};
        c.output = n == 1 ? "fig2a.csv" : "fig2b.csv";
        validate(c);
        int bad = 0;
        Table t = compute(c, threads, &bad);
        t.header.insert(t.header.begin() + 2, {"preset", "fig2"});
        write_table(dir / c.output, t);
        rep.files.push_back(dir / c.output);
        rep.failed_points += bad;
    }
    return rep;
}

oracle::OracleResult oracle_at(int l, std::optional<double> j, double energy)
{
    const OscillatorBasis basis = OscillatorBasis::make(preset_hbar_omega, preset_mu(), l);
    const RadialPotential v = nuclear(l, j);
    const oracle::OracleProblem p{v, proton_charge_product, l, preset_mu()};
    return oracle::phase_shift(p, energy, oracle::NumerovGrid::for_problem(basis.r0, v.range));
}

// delta_0(b) for the Fig. 3 combinations of (hbar_omega, N).
RunReport fig3(const std::filesystem::path& dir, int threads)
{
    struct Series {
        double hw;
        int n;
    };
    const std::vector<Series> series{{18, 4}, {18, 9}, {18, 19}, {10, 9}, {26, 9}};
    const auto grid = uniform(3.0, 12.0, 0.1);
    RunReport rep;
    for (double energy : {2.0, 10.0}) {
        std::vector<std::vector<PlateauPoint>> scans(series.size());
        parallel_for(static_cast<int>(series.size()), threads, [&](int s) {
            CoulombProblem p;
            p.nuclear = nuclear(0, std::nullopt);
            p.z1z2 = proton_charge_product;
            p.basis = OscillatorBasis::make(series[at(s)].hw, preset_mu(), 0);
            p.N = series[at(s)].n;
            scans[at(s)] = plateau_scan(p, energy, grid);
        });
        const std::string name = energy == 2.0 ? "fig3a.csv" : "fig3b.csv";
        Table t = preset_table("fig3", "p-15N delta_0 versus cut radius b");
        note_woods_saxon(t);
        t.note("E", energy);
        t.note("z1z2", proton_charge_product);
        t.note("delta_exact", oracle_at(0, std::nullopt, energy).delta);
        t.columns = {"b"};
        for (std::size_t s = 0; s < series.size(); ++s) {
            const std::string tag = "hw" + std::to_string(static_cast<int>(series[s].hw)) + "_N" + std::to_string(series[s].n);
            t.columns.push_back("delta_" + tag);
            const Plateau pl = detect_plateau(scans[s], 0.02);
            t.note("plateau_" + tag, std::vector<double>{pl.b_lo, pl.b_hi, pl.value});
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<Cell> row{grid[i]};
            for (const auto& s : scans)
                row.emplace_back(s[i].delta);
            t.rows.push_back(std::move(row));
        }
        write_table(dir / name, t);
        rep.files.push_back(dir / name);
    }
    return rep;
}

// Exact and HORSE phases and a_n^2 of a p-15N partial wave over an energy grid.
struct CoulombSweep {
    std::vector<std::string> window;                     // violations of b < r_N^cl, kept as in the figure
    std::vector<double> exact_delta;
    std::vector<std::vector<double>> exact_a2;           // [n][E]
    std::vector<std::vector<double>> delta;              // [N][E]
    std::vector<std::vector<std::vector<double>>> a2;    // [N][n][E]
    int failed = 0;
};

CoulombSweep coulomb_sweep(int l, std::optional<double> j, const std::vector<double>& e, const std::vector<int>& ns,
                           const std::vector<int>& coef, int threads)
{
    const OscillatorBasis basis = OscillatorBasis::make(preset_hbar_omega, preset_mu(), l);
    std::vector<CoulombSystem> systems;
    for (int n : ns) {
        CoulombProblem p;
        p.nuclear = nuclear(l, j);
        p.z1z2 = proton_charge_product;
        p.b = preset_b;
        p.basis = basis;
        p.N = n;
        systems.push_back(prepare(p, false));
    }
    const std::size_t ne = e.size();
    CoulombSweep out;
    for (std::size_t s = 0; s < systems.size(); ++s)
        if (const auto w = systems[s].problem.window_violation())
            out.window.push_back("N=" + std::to_string(ns[s]) + ": " + *w);
    out.exact_delta.assign(ne, nan);
    out.exact_a2.assign(coef.size(), std::vector<double>(ne, nan));
    out.delta.assign(ns.size(), std::vector<double>(ne, nan));
    out.a2.assign(ns.size(), std::vector<std::vector<double>>(coef.size(), std::vector<double>(ne, nan)));
    std::vector<int> bad(ne, 0);
    parallel_for(static_cast<int>(ne), threads, [&](int i) {
        const std::size_t ii = at(i);
        try {
            const oracle::OracleResult o = oracle_at(l, j, e[ii]);
            out.exact_delta[ii] = o.delta;
            for (std::size_t c = 0; c < coef.size(); ++c) {
                const double a = oracle::overlap_coefficient(o.wave, basis, coef[c]);
                out.exact_a2[c][ii] = a * a;
            }
        } catch (const Error&) {
            bad[ii] = 1;
        }
        for (std::size_t s = 0; s < systems.size(); ++s) {
            try {
                const CoulombRenormalization r = renormalize(systems[s], e[ii]);
                out.delta[s][ii] = r.phase.delta;
                for (std::size_t c = 0; c < coef.size(); ++c)
                    out.a2[s][c][ii] = r.a[at(coef[c])] * r.a[at(coef[c])];
            } catch (const Error&) {
                bad[ii] = 1;
            }
        }
    });
    // Continuous curves for plotting.
    auto unwrap = [](std::vector<double>& d) {
        std::vector<double> ok;
        for (double x : d)
            if (!std::isnan(x))
                ok.push_back(x);
        const auto c = unwrap_phases(ok);
        std::size_t k = 0;
        for (double& x : d)
            if (!std::isnan(x))
                x = c[k++];
    };
    unwrap(out.exact_delta);
    for (auto& d : out.delta)
        unwrap(d);
    for (int b : bad)
        out.failed += b;
    return out;
}

Table sweep_table(const std::string& preset, const std::string& what, int l, std::optional<double> j,
                  const std::vector<double>& e, const std::vector<int>& ns, const std::vector<int>& coef,
                  bool phases, const CoulombSweep& s)
{
    Table t = preset_table(preset, what);
    note_woods_saxon(t);
    t.note("l", static_cast<double>(l));
    t.note("j", j ? jname(*j) : std::string("none"));
    t.note("z1z2", proton_charge_product);
    t.note("b", preset_b);
    t.note("failed_points", static_cast<double>(s.failed));
    for (const auto& w : s.window)
        t.note("window_violation", w);
    t.columns = {"E"};
    if (phases) {
        t.columns.push_back("delta_exact");
        for (int n : ns)
            t.columns.push_back("delta_N" + std::to_string(n));
    }
    for (int c : coef) {
        t.columns.push_back("a" + std::to_string(c) + "_sq_exact");
        for (int n : ns)
            t.columns.push_back("a" + std::to_string(c) + "_sq_N" + std::to_string(n));
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::vector<Cell> row{e[i]};
        if (phases) {
            row.emplace_back(s.exact_delta[i]);
            for (std::size_t k = 0; k < ns.size(); ++k)
                row.emplace_back(s.delta[k][i]);
        }
        for (std::size_t c = 0; c < coef.size(); ++c) {
            row.emplace_back(s.exact_a2[c][i]);
            for (std::size_t k = 0; k < ns.size(); ++k)
                row.emplace_back(s.a2[k][c][i]);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

const std::vector<int> sweep_ns{10, 8, 6, 4};

RunReport fig45(const std::string& preset, const std::filesystem::path& dir, int threads)
{
    const bool phases = preset == "fig4";
    const std::vector<int> coef = phases ? std::vector<int>{} : std::vector<int>{0, 1, 2};
    const std::string what = phases ? "p-15N s-wave phase shift versus E" : "p-15N s-wave a_n^2 versus E";
    RunReport rep;
    const std::vector<std::pair<std::string, std::vector<double>>> grids{
        {preset + "a.csv", uniform(0.25, 30.0, 0.25)},
        {preset + "b.csv", uniform(0.3, 1.3, 0.01)},  // resonance region
    };
    for (const auto& [name, e] : grids) {
        const CoulombSweep s = coulomb_sweep(0, std::nullopt, e, sweep_ns, coef, threads);
        write_table(dir / name, sweep_table(preset, what, 0, std::nullopt, e, sweep_ns, coef, phases, s));
        rep.files.push_back(dir / name);
        rep.failed_points += s.failed;
    }
    return rep;
}

RunReport fig6(const std::filesystem::path& dir)
{
    const int n = 10, m_large = 100;
    const auto r = uniform(0.0, 15.0, 0.05);
    const OscillatorBasis basis = OscillatorBasis::make(preset_hbar_omega, preset_mu(), 0);
    CoulombProblem p;
    p.nuclear = nuclear(0, std::nullopt);
    p.z1z2 = proton_charge_product;
    p.b = preset_b;
    p.basis = basis;
    p.N = n;
    const CoulombSystem sys = prepare(p);
    Table t = preset_table("fig6", "p-15N s-wave radial function r u(r), exact and reconstructed");
    note_woods_saxon(t);
    t.note("N", static_cast<double>(n));
    t.columns = {"r"};
    std::vector<std::vector<double>> cols;
    for (double energy : {3.0, 15.0}) {
        const std::string tag = "_E" + std::to_string(static_cast<int>(energy));
        t.columns.push_back("u_exact" + tag);
        t.columns.push_back("u_M" + std::to_string(n) + tag);
        t.columns.push_back("u_M" + std::to_string(m_large) + tag);
        const oracle::OracleResult o = oracle_at(0, std::nullopt, energy);
        const CoulombRenormalization ren = renormalize(sys, energy, m_large);
        std::vector<double> exact;
        for (double x : r)
            exact.push_back(x <= o.wave.r.back() ? o.wave.at(x) : nan);
        cols.push_back(exact);
        cols.push_back(reconstruct_wavefunction(basis, ren.a, r, n));
        cols.push_back(reconstruct_wavefunction(basis, ren.a, r, m_large));
        t.note("delta_exact" + tag, o.delta);
        t.note("delta_horse" + tag, ren.phase.delta);
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::vector<Cell> row{r[i]};
        for (const auto& c : cols)
            row.emplace_back(c[i]);
        t.rows.push_back(std::move(row));
    }
    write_table(dir / "fig6.csv", t);
    return {{dir / "fig6.csv"}, 0};
}

// p (fig7) and d (fig8) waves for both spin-orbit partners.
RunReport fig78(const std::string& preset, const std::filesystem::path& dir, int threads)
{
    const int l = preset == "fig7" ? 1 : 2;
    const auto e = uniform(0.25, 30.0, 0.25);
    const std::vector<int> coef{1};
    RunReport rep;
    for (double j : {l - 0.5, l + 0.5}) {
        const CoulombSweep s = coulomb_sweep(l, j, e, sweep_ns, coef, threads);
        const std::string name = preset + "_j" + jname(j) + ".csv";
        write_table(dir / name, sweep_table(preset, "p-15N phase shift and a_1^2 versus E", l, j, e, sweep_ns, coef, true, s));
        rep.files.push_back(dir / name);
        rep.failed_points += s.failed;
    }
    return rep;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

RunReport run_preset(const std::string& name, const std::filesystem::path& dir, int threads)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    if (name == "fig1")
        return fig1(dir);
    if (name == "fig2")
        return fig2(dir, threads);
    if (name == "fig3")
        return fig3(dir, threads);
    if (name == "fig4" || name == "fig5")
        return fig45(name, dir, threads);
    if (name == "fig6")
        return fig6(dir);
    if (name == "fig7" || name == "fig8")
        return fig78(name, dir, threads);
    throw ConfigError("--preset: '" + name + "' is not one of fig1 .. fig8");
}

} // namespace horse::cli
