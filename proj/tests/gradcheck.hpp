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

// Central finite-difference gradient checker.

#ifndef LAYOUTGRAPH_TESTS_GRADCHECK_HPP_
#define LAYOUTGRAPH_TESTS_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "layoutgraph/autodiff.hpp"

namespace lgtest {

struct GradCheck {
  double max_rel = 0.0;
  std::size_t checked = 0;
  // Mismatching coordinates where the function is not smooth within h of the
  // point (a relu kink or a clamp edge); these are skipped.
  std::size_t kinks = 0;
};

// Relative error with a magnitude floor so that gradients which are zero up
// to rounding compare absolutely.
inline double rel_err(double a, double b, double floor = 1e-3) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

using ScalarFn = std::function<lg::Var(lg::Tape&, const std::vector<lg::Var>&)>;

inline GradCheck gradcheck(std::vector<lg::Tensor> inputs, const ScalarFn& f, double h = 1e-3) {
  std::vector<lg::Tensor> analytic;
  {
    lg::Tape tape;
    std::vector<lg::Var> leaves;
    for (const auto& t : inputs) leaves.push_back(tape.leaf(t));
    lg::Var out = f(tape, leaves);
    tape.backward(out);
    for (auto v : leaves) analytic.push_back(tape.grad(v));
  }
  auto eval = [&]() {
    lg::Tape tape;
    std::vector<lg::Var> leaves;
    for (const auto& t : inputs) leaves.push_back(tape.constant(t));
    return f(tape, leaves).value().item();
  };
  GradCheck r;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      const double x0 = inputs[k][i];
      auto central = [&](double step) {
        inputs[k][i] = x0 + step;
        const double fp = eval();
        inputs[k][i] = x0 - step;
        const double fm = eval();
        inputs[k][i] = x0;
        return (fp - fm) / (2.0 * step);
      };
      const double fd = central(h);
      const double err = rel_err(analytic[k][i], fd);
      // Only a disagreement is examined for non-smoothness: the finite
      // difference itself must then be unstable between h and h/2.
      if (err >= 1e-4 && rel_err(fd, central(h / 2)) > 1e-4) {
        ++r.kinks;
        continue;
      }
      r.max_rel = std::max(r.max_rel, err);
      ++r.checked;
    }
  }
  return r;
}

struct ParamGradCheck {
  double max_rel = 0.0;
  std::size_t checked = 0;
  std::size_t kinks = 0;
  std::size_t nonzero = 0;  // checked coordinates with a nonzero analytic gradient
  std::string worst;        // parameter holding max_rel
};

// Finite-difference check of d f / d params over a ParamStore. Tensors with
// more than `budget` entries are sampled: every coordinate with a nonzero
// analytic gradient is eligible first, then a few zero ones.
inline ParamGradCheck gradcheck_params(lg::ParamStore& store, const std::function<lg::Var(lg::Tape&)>& f,
                                       std::size_t budget = 64, std::uint64_t seed = 1, double h = 1e-3) {
  lg::Gradients g(store.size());
  {
    lg::Tape tape;
    lg::Var out = f(tape);
    tape.backward(out);
    tape.collect(g);
  }
  auto eval = [&]() {
    lg::Tape tape;
    return f(tape).value().item();
  };
  std::mt19937_64 rng(seed);
  ParamGradCheck r;
  for (lg::ParamId id = 0; id < store.size(); ++id) {
    lg::Tensor& t = store.value(id);
    const lg::Tensor* ga = g.get(id);
    std::vector<std::size_t> nz, zero;
    for (std::size_t i = 0; i < t.size(); ++i) ((ga && (*ga)[i] != 0.0) ? nz : zero).push_back(i);
    std::vector<std::size_t> picks;
    if (t.size() <= budget) {
      for (std::size_t i = 0; i < t.size(); ++i) picks.push_back(i);
    } else {
      std::shuffle(nz.begin(), nz.end(), rng);
      std::shuffle(zero.begin(), zero.end(), rng);
      for (std::size_t i = 0; i < std::min(nz.size(), budget); ++i) picks.push_back(nz[i]);
      for (std::size_t i = 0; i < std::min<std::size_t>(zero.size(), 8); ++i) picks.push_back(zero[i]);
    }
    for (std::size_t i : picks) {
      const double x0 = t[i];
      auto central = [&](double step) {
        t[i] = x0 + step;
        const double fp = eval();
        t[i] = x0 - step;
        const double fm = eval();
        t[i] = x0;
        return (fp - fm) / (2.0 * step);
      };
      const double a = ga ? (*ga)[i] : 0.0;
      const double fd = central(h);
      const double err = rel_err(a, fd);
      if (err >= 1e-4 && rel_err(fd, central(h / 2)) > 1e-4) {
        ++r.kinks;
        continue;
      }
      if (err > r.max_rel) {
        r.max_rel = err;
        r.worst = store.name(id);
      }
      ++r.checked;
      if (a != 0.0) ++r.nonzero;
    }
  }
  return r;
}

inline lg::Tensor random_tensor(lg::Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
  lg::Tensor t(rows, cols);
  for (double& v : t.data()) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace lgtest

#endif  // LAYOUTGRAPH_TESTS_GRADCHECK_HPP_
