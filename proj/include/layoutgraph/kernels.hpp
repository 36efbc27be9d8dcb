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

// Dense matrix kernels. Every kernel has a serial reference (the *_serial
// variants, used by the tests and the benchmark) and an OpenMP version that
// splits the output by rows. Each output element is produced by the same
// sequential inner loop in both, so results are bit-identical regardless of
// thread count.

#ifndef LAYOUTGRAPH_KERNELS_HPP_
#define LAYOUTGRAPH_KERNELS_HPP_

#include <cstddef>

namespace lg::kernels {

// c[n x m] = a[n x k] * b[k x m]
void matmul_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m);
void matmul(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m);

// c[n x m] += a[n x k] * b[m x k]^T
void matmul_nt_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                          std::size_t m);
void matmul_nt_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m);

// c[k x m] += a[n x k]^T * b[n x m]
void matmul_tn_acc_serial(const double* a, const double* b, double* c, std::size_t n, std::size_t k,
                          std::size_t m);
void matmul_tn_acc(const double* a, const double* b, double* c, std::size_t n, std::size_t k, std::size_t m);

// Number of threads the parallel kernels may use; 0 restores the default.
void set_num_threads(int threads);
int num_threads();

}  // namespace lg::kernels

#endif  // LAYOUTGRAPH_KERNELS_HPP_
