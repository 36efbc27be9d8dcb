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

#include "layoutgraph/objective.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "layoutgraph/error.hpp"

namespace lg {

void LossWeights::validate() const {
  if (!(lambda > 0.0) || !(eta > 0.0)) throw ValidationError("loss weights: lambda and eta must be positive");
}

ElementLoss element_loss(const std::vector<Box4>& pred, const std::vector<Box4>& truth, double canvas_w,
                         double canvas_h, double eta) {
  if (pred.size() != truth.size()) throw ValidationError("element loss: prediction and truth counts differ");
  if (!(canvas_w > 0.0) || !(canvas_h > 0.0)) throw ValidationError("element loss: canvas must be positive");
  ElementLoss out;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Box4& p = pred[i];
    for (std::size_t j = 0; j < 4; ++j) out.mse += (p[j] - truth[i][j]) * (p[j] - truth[i][j]);
    out.boundary += std::max(-p[0], 0.0) + std::max(-p[1], 0.0) + std::max(p[0] + p[2] - canvas_w, 0.0) +
                    std::max(p[1] + p[3] - canvas_h, 0.0);
  }
  if (!pred.empty()) out.mse /= static_cast<double>(pred.size());
  out.boundary *= eta;
  return out;
}

double constraint_loss(const std::vector<double>& probs, const std::vector<double>& flags) {
  if (probs.size() != flags.size()) throw ValidationError("constraint loss: probability and flag counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double q = std::clamp(probs[i], kBceEps, 1.0 - kBceEps);
    s -= flags[i] * std::log(q) + (1.0 - flags[i]) * std::log(1.0 - q);
  }
  return probs.empty() ? 0.0 : s / static_cast<double>(probs.size());
}

LossReport total_loss(const std::vector<Box4>& pred, const std::vector<Box4>& truth, const std::vector<double>& probs,
                      const std::vector<double>& flags, double canvas_w, double canvas_h, const LossWeights& w) {
  w.validate();
  const ElementLoss el = element_loss(pred, truth, canvas_w, canvas_h, w.eta);
  LossReport r;
  r.element_mse = el.mse;
  r.boundary = el.boundary;
  r.constraint_bce = constraint_loss(probs, flags);
  r.total = r.element_mse + r.boundary + w.lambda * r.constraint_bce;
  return r;
}

LossReport LossVars::report() const {
  return {total.value().item(), mse.value().item(), boundary.value().item(), bce.value().item()};
}

Var boundary_penalty(Tape& tape, Var pred, double canvas_w, double canvas_h, double eta) {
  if (pred.cols() != 4) throw ShapeError("boundary: predictions must be n x 4");
  // Faces: [-x, -y, x + w - W, y + h - H].
  Tensor m(4, 4, std::vector<double>{-1, 0, 1, 0,  //
                                     0, -1, 0, 1,  //
                                     0, 0, 1, 0,   //
                                     0, 0, 0, 1});
  Tensor b = Tensor::row({0.0, 0.0, -canvas_w, -canvas_h});
  Var faces = add(matmul(pred, tape.constant(std::move(m))), tape.constant(std::move(b)));
  return scale(sum(relu(faces)), eta);
}

LossVars total_loss(Tape& tape, Var pred, const Tensor& truth, Var probs, const Tensor& flags, double canvas_w,
                    double canvas_h, const LossWeights& w) {
  w.validate();
  if (!pred.value().same_shape(truth)) throw ValidationError("total loss: prediction and truth counts differ");
  if (!probs.value().same_shape(flags)) throw ValidationError("total loss: probability and flag counts differ");
  LossVars v;
  v.mse = mse(pred, tape.constant(truth));
  v.boundary = boundary_penalty(tape, pred, canvas_w, canvas_h, w.eta);
  v.bce = bce(probs, flags);
  v.total = add(add(v.mse, v.boundary), scale(v.bce, w.lambda));
  return v;
}

std::string loss_csv_header() { return "step,total,mse,boundary,bce"; }

std::string loss_csv_row(std::size_t step, const LossReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g", step, r.total, r.element_mse, r.boundary,
                r.constraint_bce);
  return buf;
}

}  // namespace lg
