#include "horse/coulomb.hpp"
#include "horse/multichannel.hpp"
#include "horse/oracle.hpp"
#include "horse/pmatrix.hpp"
#include "horse/potential.hpp"
#include "horse/scattering.hpp"
#include "horse/units.hpp"

#include <benchmark/benchmark.h>

using namespace horse;

namespace {

const double mu15 = reduced_mass(1.0, 15.0);
const RadialPotential ws = woods_saxon(WoodsSaxonParams::for_mass_number(15.0), 0);

void BM_PotentialMatrix(benchmark::State& state)
{
    const OscillatorBasis b = OscillatorBasis::make(18.0, mu15, 0);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(potential_matrix(b, ws, n));
}
BENCHMARK(BM_PotentialMatrix)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_Diagonalize(benchmark::State& state)
{
    const OscillatorBasis b = OscillatorBasis::make(18.0, mu15, 0);
    const int n = static_cast<int>(state.range(0));
    const Eigen::MatrixXd h = kinetic_matrix(b, n) + potential_matrix(b, ws, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(diagonalize_matrix(b, h));
}
BENCHMARK(BM_Diagonalize)->Arg(10)->Arg(40)->Arg(160)->Unit(benchmark::kMicrosecond);

// One energy point costs a G_NN sum plus four asymptotic solutions.
void BM_PhaseSweep(benchmark::State& state)
{
    const TruncatedHamiltonian h = diagonalize(OscillatorBasis::make(18.0, mu15, 0), ws, 10);
    for (auto _ : state)
        for (int i = 0; i < 300; ++i)
            benchmark::DoNotOptimize(phase_shift(h, 0.1 + 0.1 * i));
    state.SetItemsProcessed(state.iterations() * 300);
}
BENCHMARK(BM_PhaseSweep)->Unit(benchmark::kMicrosecond);

void BM_CoulombPhase(benchmark::State& state)
{
    CoulombProblem p;
    p.nuclear = ws;
    p.z1z2 = 7.0;
    p.b = 7.0;
    p.basis = OscillatorBasis::make(18.0, mu15, 0);
    p.N = 10;
    const CoulombSystem s = prepare(p);
    for (auto _ : state)
        for (int i = 0; i < 100; ++i)
            benchmark::DoNotOptimize(coulomb_phase_shift(s, 0.3 + 0.3 * i));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CoulombPhase)->Unit(benchmark::kMicrosecond);

void BM_OraclePhase(benchmark::State& state)
{
    const auto grid = oracle::NumerovGrid::for_problem(oscillator_radius(18.0, mu15), ws.range);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::phase_shift({ws, 7.0, 0, mu15}, 10.0, grid));
}
BENCHMARK(BM_OraclePhase)->Unit(benchmark::kMillisecond);

void BM_TwoChannelSMatrix(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const std::vector<Channel> ch{{0, mu15, 0.0, 0.0, n, 18.0}, {0, mu15, 2.0, 0.0, n, 18.0}};
    CouplingPotentials v(2, std::vector<RadialPotential>(2));
    v[0][0] = square_well(-20.0, 3.0);
    v[1][1] = square_well(-15.0, 3.0);
    v[0][1] = square_well(-5.0, 3.0);
    const CoupledHamiltonian h = build_coupled_hamiltonian(ch, v);
    for (auto _ : state)
        benchmark::DoNotOptimize(s_matrix(h, 7.0));
}
BENCHMARK(BM_TwoChannelSMatrix)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
