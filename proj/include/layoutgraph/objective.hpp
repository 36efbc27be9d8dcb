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

// Composite placement objective:
//   total = element_mse + boundary + lambda * constraint_bce
// element_mse is the mean over elements of the squared (x, y, w, h)
// difference, boundary charges eta per unit a box protrudes past the canvas,
// and constraint_bce is the mean binary cross-entropy of the constraint
// probabilities. The functions are unit-agnostic: pass pixels and the pixel
// canvas, or canvas-normalised values and a 1 x 1 canvas.

#ifndef LAYOUTGRAPH_OBJECTIVE_HPP_
#define LAYOUTGRAPH_OBJECTIVE_HPP_

#include <array>
#include <string>
#include <vector>

#include "layoutgraph/autodiff.hpp"

namespace lg {

struct LossWeights {
  double lambda = 1.0;
  double eta = 1.0;

  void validate() const;
};

struct LossReport {
  double total = 0.0;
  double element_mse = 0.0;
  double boundary = 0.0;
  double constraint_bce = 0.0;
};

using Box4 = std::array<double, 4>;  // x, y, w, h

struct ElementLoss {
  double mse = 0.0;
  double boundary = 0.0;
};

// Throw ValidationError on count mismatch.
ElementLoss element_loss(const std::vector<Box4>& pred, const std::vector<Box4>& truth, double canvas_w,
                         double canvas_h, double eta);
double constraint_loss(const std::vector<double>& probs, const std::vector<double>& flags);
LossReport total_loss(const std::vector<Box4>& pred, const std::vector<Box4>& truth, const std::vector<double>& probs,
                      const std::vector<double>& flags, double canvas_w, double canvas_h, const LossWeights& w);

struct LossVars {
  Var total, mse, boundary, bce;
  LossReport report() const;
};

// Differentiable form. pred is n x 4, probs is k x 1 (k may be 0).
Var boundary_penalty(Tape& tape, Var pred, double canvas_w, double canvas_h, double eta);
LossVars total_loss(Tape& tape, Var pred, const Tensor& truth, Var probs, const Tensor& flags, double canvas_w,
                    double canvas_h, const LossWeights& w);

std::string loss_csv_header();
std::string loss_csv_row(std::size_t step, const LossReport& r);

}  // namespace lg

#endif  // LAYOUTGRAPH_OBJECTIVE_HPP_
