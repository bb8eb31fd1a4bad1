#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "needreplay/agents/cliffwalk_replay.hpp"
#include "needreplay/agents/need_weighted_sampler.hpp"
#include "needreplay/envs/dyna_maze.hpp"
#include "needreplay/replay/max_priority_queue.hpp"
#include "needreplay/replay/proportional_sampler.hpp"
#include "needreplay/sr/tabular_sr.hpp"

using namespace needreplay;

namespace {

ProportionalSampler filled_sampler(std::size_t size, Rng& rng) {
  ProportionalSampler sampler(size, 0.6, 1e-8);
  std::exponential_distribution<double> priority(1.0);
  for (std::size_t i = 0; i < size; ++i) sampler.push(priority(rng));
  return sampler;
}

void BM_SamplerSample(benchmark::State& state) {
  Rng rng(1);
  const ProportionalSampler sampler = filled_sampler(static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng));
}
BENCHMARK(BM_SamplerSample)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);

void BM_SamplerUpdate(benchmark::State& state) {
  Rng rng(2);
  const auto size = static_cast<std::size_t>(state.range(0));
  ProportionalSampler sampler = filled_sampler(size, rng);
  std::uniform_int_distribution<std::size_t> index(0, size - 1);
  std::uniform_real_distribution<double> priority(0.0, 2.0);
  for (auto _ : state) sampler.update(index(rng), priority(rng));
}
BENCHMARK(BM_SamplerUpdate)->RangeMultiplier(16)->Range(1 << 10, 1 << 20);

void BM_NeedWeightedSample(benchmark::State& state) {
  Rng rng(3);
  const BlindCliffwalk env(static_cast<int>(state.range(0)));
  const auto buffer = enumerate_cliffwalk_experiences(env);
  std::vector<StateId> states;
  for (const Transition& t : buffer) states.push_back(t.state);
  NeedWeightedSampler sampler(states, env.state_count(), 0.6, 1e-8);
  const Eigen::VectorXd need = Eigen::VectorXd::LinSpaced(env.state_count(), 0.1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(need, rng));
}
BENCHMARK(BM_NeedWeightedSample)->DenseRange(8, 16, 4);

void BM_QueuePop(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  Rng rng(4);
  std::uniform_real_distribution<double> priority(0.0, 1.0);
  MaxPriorityQueue queue;
  for (auto _ : state) {
    state.PauseTiming();
    queue.clear();
    for (int i = 0; i < size; ++i) queue.insert(i / 4, i % 4, priority(rng));
    state.ResumeTiming();
    benchmark::DoNotOptimize(queue.pop_best([](const QueueEntry& e) { return e.priority * (1.0 + e.state); }));
  }
}
BENCHMARK(BM_QueuePop)->Range(16, 1024);

void BM_SrTdUpdate(benchmark::State& state) {
  const DynaMaze maze;
  SuccessorMatrix sr = SuccessorMatrix::init_uniform(maze, {0.95, 0.5, 0.1});
  EligibilityTrace trace(maze.state_count());
  Rng rng(5);
  std::uniform_int_distribution<ActionId> action(0, 3);
  StateId s = maze.start_state();
  for (auto _ : state) {
    const StepResult r = maze.transition(s, action(rng), rng);
    sr.td_lambda_update(trace, s, r.next_state, r.terminal);
    s = r.terminal ? maze.start_state() : r.next_state;
  }
}
BENCHMARK(BM_SrTdUpdate);

}  // namespace

BENCHMARK_MAIN();
