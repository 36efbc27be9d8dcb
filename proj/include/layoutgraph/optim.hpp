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

// Adam with bias correction.

#ifndef LAYOUTGRAPH_OPTIM_HPP_
#define LAYOUTGRAPH_OPTIM_HPP_

#include <cstdint>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/tensor.hpp"

namespace lg {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const;
};

struct AdamState {
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  std::uint64_t step = 0;
};

// One update of every parameter. Missing gradient entries count as zero.
// Throws ShapeError when a gradient does not match its parameter.
void adam_step(ParamStore& params, const Gradients& grads, AdamState& state, const AdamConfig& cfg);

}  // namespace lg

#endif  // LAYOUTGRAPH_OPTIM_HPP_
