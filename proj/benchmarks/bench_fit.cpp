// Hot paths: the clamp-level solver (inner loop of every constraint pass),
// the ranking E-step, and whole fits at a few start budgets.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "cwrm/constraints.hpp"
#include "cwrm/datagen.hpp"
#include "cwrm/em.hpp"
#include "cwrm/mixreg.hpp"
#include "cwrm/rng.hpp"
#include "cwrm/types.hpp"

namespace {

cwrm::Dataset bench_data() {
  cwrm::ScenarioSpec spec = cwrm::preset("simdata1");
  spec.seed = 7;
  return cwrm::generate(spec);
}

cwrm::WeightedValues bench_values(int k) {
  cwrm::RngStream rng(99, static_cast<std::uint64_t>(k));
  cwrm::WeightedValues wv;
  wv.c = 20.0;
  for (int j = 0; j < k; ++j) {
    wv.values.push_back(std::pow(10.0, rng.uniform(-3.0, 3.0)));
    wv.weights.push_back(rng.uniform(0.05, 1.0));
  }
  return wv;
}

void BM_OptimalThreshold(benchmark::State& state) {
  const cwrm::WeightedValues wv = bench_values(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwrm::optimal_threshold(wv));
  }
}
BENCHMARK(BM_OptimalThreshold)->Arg(4)->Arg(12)->Arg(48);

void BM_ConstrainScatters(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  cwrm::RngStream rng(101, static_cast<std::uint64_t>(d));
  std::vector<cwrm::MatrixXd> scatters;
  for (int g = 0; g < 3; ++g) {
    cwrm::MatrixXd b(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) b(r, c) = rng.normal();
    }
    scatters.push_back(b * b.transpose() +
                       0.05 * cwrm::MatrixXd::Identity(d, d));
  }
  const cwrm::VectorXd weights = cwrm::VectorXd::Constant(3, 1.0 / 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwrm::constrain_scatters(scatters, weights, 4.0));
  }
}
BENCHMARK(BM_ConstrainScatters)->Arg(2)->Arg(5)->Arg(10);

void BM_EAndCStep(benchmark::State& state) {
  const cwrm::Dataset data = bench_data();
  cwrm::FitConfig config;
  config.n_groups = 2;
  config.alpha = 0.1;
  config.c_x = 20.0;
  config.c_eps = 20.0;
  cwrm::RngStream rng(5, 0);
  const cwrm::ModelParams params = cwrm::initialize(data, config, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwrm::e_and_c_step(data, params, config.alpha));
  }
}
BENCHMARK(BM_EAndCStep);

void BM_Fit(benchmark::State& state) {
  const cwrm::Dataset data = bench_data();
  cwrm::FitConfig config;
  config.n_groups = 2;
  config.alpha = 0.1;
  config.c_x = 20.0;
  config.c_eps = 20.0;
  config.n_starts = static_cast<int>(state.range(0));
  config.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwrm::fit(data, config));
  }
}
BENCHMARK(BM_Fit)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_FitMixReg(benchmark::State& state) {
  const cwrm::Dataset data = bench_data();
  cwrm::FitConfig config;
  config.n_groups = 2;
  config.alpha = 0.1;
  config.c_eps = 20.0;
  config.n_starts = static_cast<int>(state.range(0));
  config.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cwrm::fit_trimmed_mixreg(data, config));
  }
}
BENCHMARK(BM_FitMixReg)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
