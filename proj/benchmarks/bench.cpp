#include <benchmark/benchmark.h>

#include "dmcap/channels.hpp"
#include "dmcap/prob.hpp"
#include "dmcap/solver.hpp"

namespace {

dmcap::TransitionMatrix small_channel() {
  return dmcap::from_matrix({{0.7, 0.2, 0.1}, {0.1, 0.2, 0.7}});
}

dmcap::TransitionMatrix impulse_channel() {
  return dmcap::bernoulli_gaussian_channel(dmcap::BernoulliGaussianParams{});
}

void bm_output_marginal(benchmark::State& state) {
  dmcap::TransitionMatrix W = impulse_channel();
  dmcap::ProbVec p = dmcap::ProbVec::uniform(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::output_marginal(p, W));
  }
}
BENCHMARK(bm_output_marginal);

void bm_classical_step_small(benchmark::State& state) {
  dmcap::TransitionMatrix W = small_channel();
  dmcap::ProbVec p({0.3, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::classical_step(p, W));
  }
}
BENCHMARK(bm_classical_step_small);

void bm_classical_step_impulse(benchmark::State& state) {
  dmcap::TransitionMatrix W = impulse_channel();
  dmcap::ProbVec p = dmcap::ProbVec::uniform(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::classical_step(p, W));
  }
}
BENCHMARK(bm_classical_step_impulse);

void bm_matz_step_impulse(benchmark::State& state) {
  dmcap::TransitionMatrix W = impulse_channel();
  dmcap::ProbVec p = dmcap::ProbVec::uniform(10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::matz_step(p, W, 0.5));
  }
}
BENCHMARK(bm_matz_step_impulse);

void bm_proximal_step_small(benchmark::State& state) {
  dmcap::TransitionMatrix W = small_channel();
  dmcap::ProbVec p({0.3, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::proximal_step(p, W, 0.5));
  }
}
BENCHMARK(bm_proximal_step_small);

void bm_select_lambda_small(benchmark::State& state) {
  dmcap::TransitionMatrix W = small_channel();
  dmcap::ProbVec p({0.3, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::select_lambda(p, W));
  }
}
BENCHMARK(bm_select_lambda_small);

void bm_solve_classical_small(benchmark::State& state) {
  dmcap::TransitionMatrix W = small_channel();
  dmcap::SolverConfig cfg;
  cfg.initial_prior = dmcap::ProbVec({0.3, 0.7});
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::solve(W, cfg));
  }
}
BENCHMARK(bm_solve_classical_small);

void bm_solve_matz_impulse(benchmark::State& state) {
  dmcap::TransitionMatrix W = impulse_channel();
  dmcap::SolverConfig cfg;
  cfg.variant = dmcap::Matz{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::solve(W, cfg));
  }
}
BENCHMARK(bm_solve_matz_impulse);

void bm_solve_proximal_impulse(benchmark::State& state) {
  dmcap::TransitionMatrix W = impulse_channel();
  dmcap::SolverConfig cfg;
  cfg.variant = dmcap::Proximal{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dmcap::solve(W, cfg));
  }
}
BENCHMARK(bm_solve_proximal_impulse);

}  // namespace

BENCHMARK_MAIN();
