#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "storyline/drawing.hpp"
#include "storyline/generate.hpp"
#include "storyline/heuristics.hpp"
#include "storyline/model.hpp"
#include "storyline/solver.hpp"

using namespace storyline;

namespace {

instance sized(int chars, int layers, std::uint64_t seed = 1) {
    generator_params p;
    p.chars = chars;
    p.layers = layers;
    p.max_size = 4;
    p.max_interactions = 3;
    return generate_instance(p, seed);
}

}  // namespace

static void BM_CrossingsBetween(benchmark::State &state) {
    const auto n = static_cast<int>(state.range(0));
    permutation a(n), b(n);
    std::iota(a.begin(), a.end(), 0);
    std::iota(b.begin(), b.end(), 0);
    std::shuffle(b.begin(), b.end(), std::mt19937_64(7));
    for (auto _ : state) benchmark::DoNotOptimize(crossings_between(a, b));
    state.SetComplexityN(n);
}
BENCHMARK(BM_CrossingsBetween)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_Bruteforce(benchmark::State &state) {
    const auto inst = sized(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) benchmark::DoNotOptimize(solve_bruteforce(inst).crossings);
}
BENCHMARK(BM_Bruteforce)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

static void BM_BuildModel(benchmark::State &state) {
    const auto inst = sized(static_cast<int>(state.range(0)), 40);
    const auto form = static_cast<formulation>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(build_model(inst, form, true).num_vars());
}
BENCHMARK(BM_BuildModel)
    ->ArgsProduct({{10, 20, 40}, {static_cast<int>(formulation::lin), static_cast<int>(formulation::plo)}})
    ->Unit(benchmark::kMillisecond);

static void BM_Improve(benchmark::State &state) {
    const auto inst = sized(static_cast<int>(state.range(0)), 60);
    const auto start = greedy_baseline(inst);
    for (auto _ : state) benchmark::DoNotOptimize(improve(inst, start).layers.size());
}
BENCHMARK(BM_Improve)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_SolveExact(benchmark::State &state) {
    const auto inst = sized(8, 12, 3);
    solve_options o;
    o.form = static_cast<formulation>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_exact(inst, o).report.best_crossings);
}
BENCHMARK(BM_SolveExact)
    ->Arg(static_cast<int>(formulation::lin))
    ->Arg(static_cast<int>(formulation::qdr))
    ->Arg(static_cast<int>(formulation::plo))
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
