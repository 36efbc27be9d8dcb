/*
   Copyright 2026 The LayoutGraph Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */


// Serial vs OpenMP matmul kernels at the shapes the network uses.
// Args: rows, inner, cols.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "layoutgraph/kernels.hpp"

namespace {

using Kernel = void (*)(const double*, const double*, double*, std::size_t, std::size_t, std::size_t);

std::vector<double> random_buffer(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// a_len/b_len/c_len are expressed through the kernel's layout.
void run(benchmark::State& state, Kernel k, std::size_t a_len, std::size_t b_len, std::size_t c_len) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kk = static_cast<std::size_t>(state.range(1));
  const auto m = static_cast<std::size_t>(state.range(2));
  auto a = random_buffer(a_len, 1);
  auto b = random_buffer(b_len, 2);
  std::vector<double> c(c_len, 0.0);
  for (auto _ : state) {
    k(a.data(), b.data(), c.data(), n, kk, m);
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * kk * m));
}

void BM_matmul(benchmark::State& s, Kernel k) {
  const auto n = s.range(0), kk = s.range(1), m = s.range(2);
  run(s, k, n * kk, kk * m, n * m);
}

void BM_matmul_nt(benchmark::State& s, Kernel k) {
  const auto n = s.range(0), kk = s.range(1), m = s.range(2);
  run(s, k, n * kk, m * kk, n * m);
}

void BM_matmul_tn(benchmark::State& s, Kernel k) {
  const auto n = s.range(0), kk = s.range(1), m = s.range(2);
  run(s, k, n * kk, n * m, kk * m);
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({16, 256, 256})->Args({64, 256, 256})->Args({256, 256, 256})->Args({64, 768, 256});
}

}  // namespace

BENCHMARK_CAPTURE(BM_matmul, serial, lg::kernels::matmul_serial)->Apply(shapes);
BENCHMARK_CAPTURE(BM_matmul, omp, lg::kernels::matmul)->Apply(shapes);
BENCHMARK_CAPTURE(BM_matmul_nt, serial, lg::kernels::matmul_nt_acc_serial)->Apply(shapes);
BENCHMARK_CAPTURE(BM_matmul_nt, omp, lg::kernels::matmul_nt_acc)->Apply(shapes);
BENCHMARK_CAPTURE(BM_matmul_tn, serial, lg::kernels::matmul_tn_acc_serial)->Apply(shapes);
BENCHMARK_CAPTURE(BM_matmul_tn, omp, lg::kernels::matmul_tn_acc)->Apply(shapes);

BENCHMARK_MAIN();
