#include <benchmark/benchmark.h>

#include "hyperma/mixed_discriminant.hpp"
#include "hyperma/quat_matrix.hpp"
#include "hyperma/random.hpp"
#include "hyperma/solver.hpp"

using namespace hyperma;

static void BM_MooreDet(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = sample_rng(1, 0, 0);
    const auto a = random_hyperhermitian(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(moore_det(a));
}
BENCHMARK(BM_MooreDet)->DenseRange(1, 6);

static void BM_Eigenvalues(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = sample_rng(1, 0, 0);
    const auto a = random_hyperhermitian(n, rng);
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(a));
}
BENCHMARK(BM_Eigenvalues)->DenseRange(1, 6);

static void BM_MixedDiscriminant(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng = sample_rng(2, 0, 0);
    MatrixList mats;
    for (std::size_t i = 0; i < n; ++i) mats.push_back(random_hyperhermitian(n, rng));
    for (auto _ : state) benchmark::DoNotOptimize(mixed_discriminant(mats));
}
BENCHMARK(BM_MixedDiscriminant)->DenseRange(2, 5);

static Problem ball_problem() {
    Problem p;
    p.n = 1;
    p.domain = DomainSpec::ball(1, 1.0);
    p.phi = TestFunction::constant(1, 1.0);
    p.f = RhsFunction::constant_value(8.0);
    return p;
}

static void BM_Residual(benchmark::State& state) {
    const auto disc = discretize(ball_problem(), 0.25);
    const auto u = sample_on(disc, [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    });
    for (auto _ : state) benchmark::DoNotOptimize(residual(u, disc));
    state.counters["nodes"] = static_cast<double>(disc.interior.size());
}
BENCHMARK(BM_Residual)->Unit(benchmark::kMicrosecond);

static void BM_SolveBall(benchmark::State& state) {
    const Problem p = ball_problem();
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(p, 0.25).report.converged);
}
BENCHMARK(BM_SolveBall)->Unit(benchmark::kMillisecond);

static void BM_SolveBoxN2(benchmark::State& state) {
    Problem p;
    p.n = 2;
    p.domain = DomainSpec::box(2, 0.5);
    p.phi = TestFunction::abs_sq(2);
    p.f = RhsFunction::constant_value(64.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(p, 0.25).report.converged);
}
BENCHMARK(BM_SolveBoxN2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
