#include <random>

#include <benchmark/benchmark.h>

#include "mdc/diagnostics.hpp"
#include "mdc/metrics.hpp"
#include "mdc/regression.hpp"
#include "mdc/specialization.hpp"

namespace {

mdc::OutputMatrix random_output(int economies, int activities, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> value(0.0, 2.0);
  std::bernoulli_distribution present(0.4);
  mdc::OutputMatrix m;
  m.values.resize(economies, activities);
  for (Eigen::Index i = 0; i < m.values.size(); ++i) m.values.data()[i] = present(rng) ? value(rng) : 0.0;
  for (int c = 0; c < economies; ++c) m.economies.push_back("c" + std::to_string(1000 + c));
  for (int p = 0; p < activities; ++p) m.activities.push_back("p" + std::to_string(10000 + p));
  return m;
}

void BM_Rca(benchmark::State& state) {
  const auto m = random_output(static_cast<int>(state.range(0)), 1300, 1);
  for (auto _ : state) benchmark::DoNotOptimize(mdc::binarize(mdc::compute_rca(m)));
}
BENCHMARK(BM_Rca)->Arg(50)->Arg(150);

void BM_Eci(benchmark::State& state) {
  const auto spec = mdc::binarize(mdc::compute_rca(random_output(static_cast<int>(state.range(0)), 1300, 2)));
  for (auto _ : state) benchmark::DoNotOptimize(mdc::eci(spec));
}
BENCHMARK(BM_Eci)->Arg(50)->Arg(150);

void BM_Fitness(benchmark::State& state) {
  mdc::set_log_level_quiet(true);
  const auto spec = mdc::binarize(mdc::compute_rca(random_output(static_cast<int>(state.range(0)), 1300, 3)));
  mdc::FitnessOptions options;
  options.max_iter = 200;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(mdc::fitness(spec, options));
    } catch (const std::exception&) {
    }
  }
}
BENCHMARK(BM_Fitness)->Arg(50)->Arg(150);

void BM_Ols(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  mdc::PanelDataset p;
  const auto rows = state.range(0);
  p.X.resize(rows, 10);
  p.y.resize(rows);
  for (Eigen::Index i = 0; i < p.X.size(); ++i) p.X.data()[i] = n(rng);
  p.X.col(0).setOnes();
  for (Eigen::Index i = 0; i < rows; ++i) {
    p.y(i) = n(rng);
    p.economies.push_back("c" + std::to_string(i));
    p.periods.push_back("t");
  }
  for (int j = 0; j < 10; ++j) {
    p.names.push_back(j == 0 ? "Intercept" : "x" + std::to_string(j));
    p.roles.push_back(j == 0 ? mdc::RegressorRole::Intercept : mdc::RegressorRole::Complexity);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mdc::ols(p));
}
BENCHMARK(BM_Ols)->Arg(300)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
