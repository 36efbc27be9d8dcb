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

#include "layoutgraph/kernels.hpp"

#include <algorithm>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lg::kernels {

namespace {

int g_threads = 0;

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kParallelWork = 1 << 15;

bool go_parallel(std::size_t work) {
#ifdef _OPENMP
  return work >= kParallelWork && !omp_in_parallel() && num_threads() > 1;
#else
  (void)work;
  return false;
#endif
}

inline void matmul_row(const double* a, const double* b, double* c, std::size_t i, std::size_t k, std::size_t m) {
  double* ci = c + i * m;
  std::fill(ci, ci + m, 0.0);
  const double* ai = a + i * k;
  for (std::size_t p = 0; p < k; ++p) {
    const double aip = ai[p];
    if (aip == 0.0) continue;
    const double* bp = b + p * m;
    for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
  }
}

inline void matmul_nt_row(const double* a, const double* b, double* c, std::size_t i, std::size_t k,
                          std::size_t m) {
  const double* ai = a + i * k;
  double* ci = c + i * m;
  for (std::size_t j = 0; j < m; ++j) {
    const double* bj = b + j * k;
    double s = 0.0;
    for (std::size_t p = 0; p < k; ++p) s += ai[p] * bj[p];
    ci[j] += s;
  }
}

inline void matmul_tn_row(const double* a, const double* b, double* c, std::size_t p, std::size_t n,
                          std::size_t k, std::size_t m) {
  double* cp = c + p * m;
  for (std::size_t i = 0; i < n; ++i) {
    const double aip = a[i * k + p];
    if (aip == 0.0) continue;
    const double* bi = b + i * m;
    for (std::size_t j = 0; j < m; ++j) cp[j] += aip * bi[j];
  }
}

}  // namespace

void set_num_threads(int threads) { g_threads = std::max(0, threads); }

int num_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

void matmul_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) matmul_row(a, b, c, i, k, m);
}

void matmul(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m) {
  if (!go_parallel(n * k * m)) return matmul_serial(a, b, c, n, k, m);
  const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long i = 0; i < rows; ++i) matmul_row(a, b, c, static_cast<std::size_t>(i), k, m);
}

void matmul_nt_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                          std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) matmul_nt_row(a, b, c, i, k, m);
}

void matmul_nt_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m) {
  if (!go_parallel(n * k * m)) return matmul_nt_acc_serial(a, b, c, n, k, m);
  const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long i = 0; i < rows; ++i) matmul_nt_row(a, b, c, static_cast<std::size_t>(i), k, m);
}

void matmul_tn_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                          std::size_t m) {
  for (std::size_t p = 0; p < k; ++p) matmul_tn_row(a, b, c, p, n, k, m);
}

void matmul_tn_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m) {
  if (!go_parallel(n * k * m)) return matmul_tn_acc_serial(a, b, c, n, k, m);
  const long rows = static_cast<long>(k);
#pragma omp parallel for schedule(static) num_threads(num_threads())
  for (long p = 0; p < rows; ++p) matmul_tn_row(a, b, c, static_cast<std::size_t>(p), n, k, m);
}

}  // namespace lg::kernels
