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

#include "layoutgraph/optim.hpp"

#include <cmath>

#include "layoutgraph/error.hpp"

namespace lg {

void AdamConfig::validate() const {
  if (!(lr > 0.0)) throw ValidationError("adam: lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ValidationError("adam: betas must lie in [0, 1)");
  if (!(eps > 0.0)) throw ValidationError("adam: eps must be positive");
}

void adam_step(ParamStore& params, const Gradients& grads, AdamState& state, const AdamConfig& cfg) {
  cfg.validate();
  const std::size_t n = params.size();
  if (grads.grads.size() != n) throw ShapeError("adam: gradient count does not match parameters");
  if (state.m.size() != n) {
    state.m.clear();
    state.v.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Tensor& p = params.value(i);
      state.m.emplace_back(p.rows(), p.cols());
      state.v.emplace_back(p.rows(), p.cols());
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < n; ++i) {
    Tensor& p = params.value(i);
    Tensor& m = state.m[i];
    Tensor& v = state.v[i];
    if (!m.same_shape(p)) throw ShapeError("adam: state shape mismatch for " + params.name(i));
    const Tensor* g = grads.get(i);
    if (g && !g->same_shape(p)) throw ShapeError("adam: gradient shape mismatch for " + params.name(i));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g ? (*g)[j] : 0.0;
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gj;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gj * gj;
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      p[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

}  // namespace lg
