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

#include "layoutgraph/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "layoutgraph/error.hpp"

namespace lg {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw ShapeError("tensor: " + std::to_string(data_.size()) + " values for shape " + std::to_string(rows) +
                     "x" + std::to_string(cols));
}

Tensor Tensor::row(std::vector<double> values) {
  const std::size_t n = values.size();
  return Tensor(1, n, std::move(values));
}

std::vector<double> Tensor::row_vector(std::size_t r) const {
  auto s = row_span(r);
  return {s.begin(), s.end()};
}

double Tensor::item() const {
  if (rows_ != 1 || cols_ != 1) throw ShapeError("tensor: item() needs a 1x1 tensor");
  return data_[0];
}

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::add_in_place(const Tensor& o) {
  if (!same_shape(o)) throw ShapeError("tensor: add_in_place shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
}

void require_finite(const Tensor& t, const char* where) {
  if (!t.all_finite()) throw ShapeError(std::string(where) + ": non-finite value");
}

}  // namespace lg
