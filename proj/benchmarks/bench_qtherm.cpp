#include <benchmark/benchmark.h>

#include "qtherm/dynamics.hpp"
#include "qtherm/nonmarkov.hpp"
#include "qtherm/thermo.hpp"

using namespace qtherm;

static void BM_DissipativeTrajectory(benchmark::State& state) {
    const auto grid = linspace(0.0, 50.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dissipative_trajectory(grid, {0.5, 0, 0.5}, 0.1, 1.0));
    }
}
BENCHMARK(BM_DissipativeTrajectory)->Arg(2000)->Arg(10000);

static void BM_AccumulateLedger(benchmark::State& state) {
    const auto grid = linspace(0.0, 50.0, static_cast<std::size_t>(state.range(0)));
    const Trajectory traj = dissipative_trajectory(grid, {0.5, 0, 0.5}, 0.1, 1.0);
    const FieldVector field = z_field(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate(traj, field));
    }
}
BENCHMARK(BM_AccumulateLedger)->Arg(2000)->Arg(10000);

static void BM_DecoherenceCacheBuild(benchmark::State& state) {
    const OhmicParams p{3.5, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(DecoherenceCache(p, 50.0, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_DecoherenceCacheBuild)->Arg(10000);

static void BM_DecoherenceCacheQuery(benchmark::State& state) {
    const OhmicParams p{3.5, 1.0};
    const DecoherenceCache cache(p, 50.0, 10000);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        if (t > 49.0) t = 0.0;
        benchmark::DoNotOptimize(cache(t));
    }
}
BENCHMARK(BM_DecoherenceCacheQuery);

static void BM_DecoherenceDirect(benchmark::State& state) {
    const OhmicParams p{3.5, 1.0};
    double t = 0.0;
    for (auto _ : state) {
        t += 0.1;
        if (t > 49.0) t = 0.0;
        benchmark::DoNotOptimize(decoherence_factor(t, p));
    }
}
BENCHMARK(BM_DecoherenceDirect);

static void BM_SweepPoint(benchmark::State& state) {
    const OhmicParams p{3.5, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(nq_of_s(p, 1.0));
        benchmark::DoNotOptimize(nc_of_s(p));
    }
}
BENCHMARK(BM_SweepPoint);

static void BM_IntegrateMaster(benchmark::State& state) {
    const auto grid = linspace(0.0, 10.0, 101);
    std::vector<LindbladTerm> terms{constant_rate_term(ComplexMatrix2::sigma_x(), 0.1)};
    const ComplexMatrix2 rho0 = density_from_bloch({0.5, 0, 0.5});
    const auto h = [](double) { return hamiltonian(z_field(1.0)); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_master(h, terms, rho0, grid));
    }
}
BENCHMARK(BM_IntegrateMaster);

BENCHMARK_MAIN();
