#include <numeric>
#include <random>

#include <benchmark/benchmark.h>

#include "ecoloom/compiler.hpp"
#include "ecoloom/engine.hpp"
#include "ecoloom/ensemble.hpp"
#include "ecoloom/exemplars.hpp"
#include "ecoloom/kernels.hpp"

using namespace ecoloom;

namespace {

struct Field {
  std::vector<Agent> agents;
  std::vector<std::uint32_t> sources, targets;
};

// n agents on a 32x32 torus, first tenth hunting the rest
Field field(std::size_t n) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> pos(0, 32);
  Field f;
  f.agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    f.agents[i].id = i;
    f.agents[i].x = pos(gen);
    f.agents[i].y = pos(gen);
    f.agents[i].carbon_biomass = 10;
    f.agents[i].alive = true;
    (i < n / 10 ? f.sources : f.targets).push_back(static_cast<std::uint32_t>(i));
  }
  return f;
}

void BM_candidates_serial(benchmark::State& state) {
  Field f = field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kernels::serial::find_candidates(f.agents, f.sources, f.targets, 1.0, 32));
  }
}
BENCHMARK(BM_candidates_serial)->Arg(2400)->Arg(10000)->Arg(25000);

void BM_candidates_parallel(benchmark::State& state) {
  Field f = field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kernels::parallel::find_candidates(f.agents, f.sources, f.targets, 1.0, 32));
  }
}
BENCHMARK(BM_candidates_parallel)->Arg(2400)->Arg(10000)->Arg(25000);

void BM_biomass_delta(benchmark::State& state) {
  Field f = field(25000);
  std::vector<std::uint32_t> all(f.agents.size());
  std::iota(all.begin(), all.end(), 0u);
  for (auto _ : state) {
    auto copy = f.agents;
    if (state.range(0)) {
      benchmark::DoNotOptimize(kernels::parallel::apply_biomass_delta(copy, all, -0.01));
    } else {
      benchmark::DoNotOptimize(kernels::serial::apply_biomass_delta(copy, all, -0.01));
    }
  }
}
BENCHMARK(BM_biomass_delta)->ArgName("parallel")->Arg(0)->Arg(1);

void BM_exemplar_run(benchmark::State& state) {
  ExemplarId id = all_exemplars()[static_cast<std::size_t>(state.range(0))];
  Exemplar ex = load_exemplar(id);
  ex.config.max_ticks = 120;
  SimProgram p = compile(ex.model);
  auto policy = state.range(1) ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(run(p, ex.config, {}, policy));
  state.SetLabel(std::string(slug(id)));
}
BENCHMARK(BM_exemplar_run)
    ->ArgNames({"exemplar", "parallel"})
    ->ArgsProduct({{0, 1, 2, 3}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_ensemble(benchmark::State& state) {
  Exemplar ex = load_exemplar(ExemplarId::PredatorPrey);
  SimProgram p = compile(ex.model);
  std::vector<std::uint64_t> seeds(8);
  std::iota(seeds.begin(), seeds.end(), 1);
  auto policy = state.range(0) ? ExecutionPolicy::Parallel : ExecutionPolicy::Serial;
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(p, ex.config, seeds, policy));
}
BENCHMARK(BM_ensemble)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
