// Copyright 2026 the privglasso authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenMP kernels against their serial references, plus the two solvers on a
// common instance.

#include <benchmark/benchmark.h>

#include "privglasso/estimator.hpp"
#include "privglasso/privacy.hpp"
#include "privglasso/reference.hpp"

using namespace privglasso;

namespace {

const DataMatrix& bench_data() {
  static const DataMatrix data =
      center(sample_gaussian(chain_precision(200), 2000, 1));
  return data;
}

void BM_gaussian_noise_serial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::gaussian_noise_serial(1000, 1000, 1.0, 7));
  }
}
BENCHMARK(BM_gaussian_noise_serial)->Unit(benchmark::kMillisecond);

void BM_gaussian_noise_omp(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        detail::gaussian_noise_matrix(1000, 1000, 1.0, 7));
  }
}
BENCHMARK(BM_gaussian_noise_omp)->Unit(benchmark::kMillisecond);

void BM_discrete_noise_serial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::discrete_noise_serial(1000, 1000, 2.0, 7));
  }
}
BENCHMARK(BM_discrete_noise_serial)->Unit(benchmark::kMillisecond);

void BM_discrete_noise_omp(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        detail::discrete_noise_matrix(1000, 1000, 2.0, 7));
  }
}
BENCHMARK(BM_discrete_noise_omp)->Unit(benchmark::kMillisecond);

void BM_sample_serial(benchmark::State& state) {
  const PrecisionMatrix theta = chain_precision(200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::sample_gaussian_serial(theta, 2000, 3));
  }
}
BENCHMARK(BM_sample_serial)->Unit(benchmark::kMillisecond);

void BM_sample_omp(benchmark::State& state) {
  const PrecisionMatrix theta = chain_precision(200);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_gaussian(theta, 2000, 3));
  }
}
BENCHMARK(BM_sample_omp)->Unit(benchmark::kMillisecond);

void BM_covariance_serial(benchmark::State& state) {
  const DataMatrix& data = bench_data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::empirical_covariance_serial(data.values));
  }
}
BENCHMARK(BM_covariance_serial)->Unit(benchmark::kMillisecond);

void BM_covariance_omp(benchmark::State& state) {
  const DataMatrix& data = bench_data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(empirical_covariance(data));
  }
}
BENCHMARK(BM_covariance_omp)->Unit(benchmark::kMillisecond);

void BM_glasso_cd(benchmark::State& state) {
  const CovarianceEstimate s = empirical_covariance(bench_data());
  LassoConfig cfg;
  cfg.lambda = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso_cd(s, cfg));
  }
}
BENCHMARK(BM_glasso_cd)->Unit(benchmark::kMillisecond);

void BM_glasso_admm(benchmark::State& state) {
  const CovarianceEstimate s = empirical_covariance(bench_data());
  LassoConfig cfg;
  cfg.lambda = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso_admm(s, cfg));
  }
}
BENCHMARK(BM_glasso_admm)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
