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

// Reverse-mode differentiation over a tape of dense 2-D ops.
//
// A Tape records every op in execution order, which is already a topological
// order, so backward() is a single reverse sweep. Trainable tensors live in a
// ParamStore; binding one to a tape creates a leaf whose gradient can be
// collected into a Gradients buffer after backward(). One tape belongs to one
// thread. Data-parallel training runs one tape per sample and sums the
// per-sample Gradients in a fixed order.

#ifndef LAYOUTGRAPH_AUTODIFF_HPP_
#define LAYOUTGRAPH_AUTODIFF_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "layoutgraph/tensor.hpp"

namespace lg {

using ParamId = std::size_t;

class ParamStore {
 public:
  ParamId add(std::string name, Tensor init);
  std::size_t size() const { return values_.size(); }
  Tensor& value(ParamId id) { return values_.at(id); }
  const Tensor& value(ParamId id) const { return values_.at(id); }
  const std::string& name(ParamId id) const { return names_.at(id); }
  // Throws NotFoundError.
  ParamId find(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t scalar_count() const;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
  std::map<std::string, ParamId> index_;
};

// One gradient tensor per parameter; entries stay empty (0 x 0) until touched.
struct Gradients {
  std::vector<Tensor> grads;

  explicit Gradients(std::size_t n = 0) : grads(n) {}
  // g += o, in parameter order.
  void accumulate(const Gradients& o);
  void scale(double s);
  const Tensor* get(ParamId id) const { return grads[id].size() ? &grads[id] : nullptr; }
};

// 64-bit Mersenne Twister with a portable uniform draw, so parameter
// initialisation is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n);  // [0, n)
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng);

class Tape;

struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Non-differentiable input.
  Var constant(Tensor value);
  // Differentiable input whose gradient is read back with grad().
  Var leaf(Tensor value);
  // Parameter leaf; binding the same id twice returns the same node.
  Var param(const ParamStore& store, ParamId id);

  const Tensor& value(Var v) const { return nodes_.at(v.id).value; }
  // Gradient of the last backward() output w.r.t. v (zeros if unreached).
  Tensor grad(Var v) const;

  // Seeds d(out)/d(out) = 1 and sweeps the tape backwards. out must be 1 x 1.
  void backward(Var out);
  // Adds parameter-leaf gradients into g (sized to the store).
  void collect(Gradients& g) const;

  std::size_t size() const { return nodes_.size(); }

  // Op construction; used by the free functions below.
  Var push(Tensor value, std::vector<std::size_t> parents, std::function<void(Tape&, std::size_t)> pullback);
  Tensor& grad_ref(std::size_t id);
  const Tensor& value_at(std::size_t id) const { return nodes_[id].value; }
  bool needs_grad(std::size_t id) const { return nodes_[id].requires_grad; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> parents;
    std::function<void(Tape&, std::size_t)> pullback;
    bool requires_grad = false;
    long param = -1;
  };
  std::vector<Node> nodes_;
  std::map<ParamId, std::size_t> param_nodes_;
};

// Primitive ops. Shapes follow row-vector convention: a layer is x * W.
Var matmul(Var a, Var b);
// a + b; b may also be a 1 x cols row broadcast over the rows of a.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, double s);
Var relu(Var a);
Var sigmoid(Var a);
Var softmax(Var a);  // row-wise
Var concat(const std::vector<Var>& parts);  // along columns, equal rows
Var concat_rows(const std::vector<Var>& parts);  // along rows, equal cols
Var mean_rows(Var a);  // n x c -> 1 x c; zero rows give zeros
Var sum(Var a);        // -> 1 x 1
Var lookup_row(Var table, std::size_t index);
// Rows of table at the given indices, in order: indices.size() x cols.
Var gather_rows(Var table, const std::vector<std::size_t>& indices);
Var repeat_rows(Var row, std::size_t n);  // 1 x c -> n x c
// Mean over rows of the squared row difference: (1/n) * sum ||a_i - b_i||^2.
Var mse(Var a, Var b);
inline constexpr double kBceEps = 1e-7;
// Mean binary cross-entropy; p is clamped to [eps, 1 - eps].
Var bce(Var p, const Tensor& targets);
// -log softmax(logits)[label] for a 1 x k row.
Var cross_entropy(Var logits, std::size_t label);

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);

}  // namespace lg

#endif  // LAYOUTGRAPH_AUTODIFF_HPP_
