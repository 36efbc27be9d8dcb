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

#include "layoutgraph/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "layoutgraph/error.hpp"
#include "layoutgraph/kernels.hpp"

namespace lg {

ParamId ParamStore::add(std::string name, Tensor init) {
  if (index_.count(name)) throw ValidationError("param store: duplicate parameter '" + name + "'");
  require_finite(init, "param store");
  const ParamId id = values_.size();
  index_[name] = id;
  names_.push_back(std::move(name));
  values_.push_back(std::move(init));
  return id;
}

ParamId ParamStore::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw NotFoundError("param store: no parameter '" + name + "'");
  return it->second;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

void Gradients::accumulate(const Gradients& o) {
  if (o.grads.size() != grads.size()) throw ShapeError("gradients: size mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (o.grads[i].size() == 0) continue;
    if (grads[i].size() == 0)
      grads[i] = o.grads[i];
    else
      grads[i].add_in_place(o.grads[i]);
  }
}

void Gradients::scale(double s) {
  for (auto& g : grads)
    for (double& v : g.data()) v *= s;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("rng: empty range");
  // Rejection sampling keeps the draw unbiased and portable.
  const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % n;
}

Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

const Tensor& Var::value() const { return tape->value(*this); }

Var Tape::constant(Tensor value) {
  require_finite(value, "constant");
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Tape::leaf(Tensor value) {
  Var v = constant(std::move(value));
  nodes_[v.id].requires_grad = true;
  return v;
}

Var Tape::param(const ParamStore& store, ParamId id) {
  if (auto it = param_nodes_.find(id); it != param_nodes_.end()) return {this, it->second};
  Var v = leaf(store.value(id));
  nodes_[v.id].param = static_cast<long>(id);
  param_nodes_[id] = v.id;
  return v;
}

Var Tape::push(Tensor value, std::vector<std::size_t> parents, std::function<void(Tape&, std::size_t)> pullback) {
  require_finite(value, "op output");
  Node n;
  n.value = std::move(value);
  for (auto p : parents) n.requires_grad = n.requires_grad || nodes_[p].requires_grad;
  if (n.requires_grad) n.pullback = std::move(pullback);
  n.parents = std::move(parents);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Tensor& Tape::grad_ref(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size() || !n.grad.same_shape(n.value)) n.grad = Tensor(n.value.rows(), n.value.cols());
  return n.grad;
}

Tensor Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id);
  if (n.grad.same_shape(n.value) && n.grad.size() == n.value.size()) return n.grad;
  return Tensor(n.value.rows(), n.value.cols());
}

void Tape::backward(Var out) {
  if (out.tape != this) throw ValidationError("backward: variable belongs to another tape");
  const Tensor& v = nodes_.at(out.id).value;
  if (v.rows() != 1 || v.cols() != 1) throw ShapeError("backward: output must be a scalar");
  for (auto& n : nodes_) n.grad = Tensor();
  grad_ref(out.id)(0, 0) = 1.0;
  for (std::size_t i = out.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.pullback || n.grad.size() == 0) continue;
    n.pullback(*this, i);
  }
}

void Tape::collect(Gradients& g) const {
  for (const auto& [pid, node] : param_nodes_) {
    const Node& n = nodes_[node];
    if (n.grad.size() == 0 || !n.grad.same_shape(n.value)) continue;
    if (pid >= g.grads.size()) throw ShapeError("collect: gradient buffer too small");
    if (g.grads[pid].size() == 0)
      g.grads[pid] = n.grad;
    else
      g.grads[pid].add_in_place(n.grad);
  }
}

namespace {

Tape& same_tape(Var a, Var b, const char* op) {
  if (a.tape == nullptr || a.tape != b.tape) throw ValidationError(std::string(op) + ": operands on different tapes");
  return *a.tape;
}

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                   " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b, "matmul");
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.cols() != B.rows()) shape_fail("matmul", A, B);
  const std::size_t n = A.rows(), k = A.cols(), m = B.cols();
  Tensor C(n, m);
  if (n && m) kernels::matmul(A.data().data(), B.data().data(), C.data().data(), n, k, m);
  const std::size_t ia = a.id, ib = b.id;
  return t.push(std::move(C), {ia, ib}, [ia, ib, n, k, m](Tape& tp, std::size_t self) {
    const Tensor& G = tp.grad_ref(self);
    if (n == 0 || m == 0 || k == 0) return;
    if (tp.needs_grad(ia)) {
      // dA = G * B^T
      const Tensor& Bv = tp.value_at(ib);
      Tensor& dA = tp.grad_ref(ia);
      kernels::matmul_nt_acc(G.data().data(), Bv.data().data(), dA.data().data(), n, m, k);
    }
    if (tp.needs_grad(ib)) {
      // dB = A^T * G
      const Tensor& Av = tp.value_at(ia);
      Tensor& dB = tp.grad_ref(ib);
      kernels::matmul_tn_acc(Av.data().data(), G.data().data(), dB.data().data(), n, k, m);
    }
  });
}

namespace {

Var add_sub(Var a, Var b, double sign, const char* op) {
  Tape& t = same_tape(a, b, op);
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  const bool broadcast = !A.same_shape(B);
  if (broadcast && !(B.rows() == 1 && B.cols() == A.cols())) shape_fail(op, A, B);
  Tensor C = A;
  const std::size_t cols = A.cols();
  for (std::size_t i = 0; i < C.size(); ++i) C[i] += sign * B[broadcast ? i % cols : i];
  const std::size_t ia = a.id, ib = b.id;
  return t.push(std::move(C), {ia, ib}, [ia, ib, sign, broadcast, cols](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    if (tp.needs_grad(ia)) tp.grad_ref(ia).add_in_place(G);
    if (tp.needs_grad(ib)) {
      Tensor& dB = tp.grad_ref(ib);
      for (std::size_t i = 0; i < G.size(); ++i) dB[broadcast ? i % cols : i] += sign * G[i];
    }
  });
}

}  // namespace

Var add(Var a, Var b) { return add_sub(a, b, 1.0, "add"); }
Var sub(Var a, Var b) { return add_sub(a, b, -1.0, "sub"); }
Var operator+(Var a, Var b) { return add(a, b); }
Var operator-(Var a, Var b) { return sub(a, b); }

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b, "mul");
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (!A.same_shape(B)) shape_fail("mul", A, B);
  Tensor C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C[i] *= B[i];
  const std::size_t ia = a.id, ib = b.id;
  return t.push(std::move(C), {ia, ib}, [ia, ib](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    if (tp.needs_grad(ia)) {
      const Tensor& Bv = tp.value_at(ib);
      Tensor& dA = tp.grad_ref(ia);
      for (std::size_t i = 0; i < G.size(); ++i) dA[i] += G[i] * Bv[i];
    }
    if (tp.needs_grad(ib)) {
      const Tensor& Av = tp.value_at(ia);
      Tensor& dB = tp.grad_ref(ib);
      for (std::size_t i = 0; i < G.size(); ++i) dB[i] += G[i] * Av[i];
    }
  });
}

Var scale(Var a, double s) {
  Tensor C = a.value();
  for (double& v : C.data()) v *= s;
  const std::size_t ia = a.id;
  return a.tape->push(std::move(C), {ia}, [ia, s](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    Tensor& dA = tp.grad_ref(ia);
    for (std::size_t i = 0; i < G.size(); ++i) dA[i] += s * G[i];
  });
}

Var relu(Var a) {
  Tensor C = a.value();
  for (double& v : C.data()) v = v > 0.0 ? v : 0.0;
  const std::size_t ia = a.id;
  return a.tape->push(std::move(C), {ia}, [ia](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    const Tensor& X = tp.value_at(ia);
    Tensor& dA = tp.grad_ref(ia);
    for (std::size_t i = 0; i < G.size(); ++i)
      if (X[i] > 0.0) dA[i] += G[i];
  });
}

Var sigmoid(Var a) {
  Tensor C = a.value();
  for (double& v : C.data()) v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  const std::size_t ia = a.id;
  return a.tape->push(std::move(C), {ia}, [ia](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    const Tensor& Y = tp.value_at(self);
    Tensor& dA = tp.grad_ref(ia);
    for (std::size_t i = 0; i < G.size(); ++i) dA[i] += G[i] * Y[i] * (1.0 - Y[i]);
  });
}

Var softmax(Var a) {
  Tensor C = a.value();
  const std::size_t cols = C.cols();
  for (std::size_t r = 0; r < C.rows(); ++r) {
    auto row = C.row_span(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (double& v : row) z += (v = std::exp(v - mx));
    for (double& v : row) v /= z;
  }
  const std::size_t ia = a.id;
  return a.tape->push(std::move(C), {ia}, [ia, cols](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    const Tensor& Y = tp.value_at(self);
    Tensor& dA = tp.grad_ref(ia);
    for (std::size_t r = 0; r < Y.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += G(r, j) * Y(r, j);
      for (std::size_t j = 0; j < cols; ++j) dA(r, j) += Y(r, j) * (G(r, j) - dot);
    }
  });
}

Var concat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  Tape& t = *parts[0].tape;
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  std::vector<std::size_t> ids, offsets;
  for (const Var& p : parts) {
    same_tape(parts[0], p, "concat");
    if (p.rows() != rows) shape_fail("concat", parts[0].value(), p.value());
    ids.push_back(p.id);
    offsets.push_back(cols);
    cols += p.cols();
  }
  Tensor C(rows, cols);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& P = parts[k].value();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < P.cols(); ++j) C(r, offsets[k] + j) = P(r, j);
  }
  return t.push(std::move(C), ids, [ids, offsets](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!tp.needs_grad(ids[k])) continue;
      Tensor& dP = tp.grad_ref(ids[k]);
      for (std::size_t r = 0; r < dP.rows(); ++r)
        for (std::size_t j = 0; j < dP.cols(); ++j) dP(r, j) += G(r, offsets[k] + j);
    }
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  Tape& t = *parts[0].tape;
  const std::size_t cols = parts[0].cols();
  std::size_t rows = 0;
  std::vector<std::size_t> ids, offsets;
  for (const Var& p : parts) {
    same_tape(parts[0], p, "concat_rows");
    if (p.cols() != cols) shape_fail("concat_rows", parts[0].value(), p.value());
    ids.push_back(p.id);
    offsets.push_back(rows);
    rows += p.rows();
  }
  Tensor C(rows, cols);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor& P = parts[k].value();
    std::copy(P.data().begin(), P.data().end(), C.data().begin() + static_cast<long>(offsets[k] * cols));
  }
  return t.push(std::move(C), ids, [ids, offsets, cols](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!tp.needs_grad(ids[k])) continue;
      Tensor& dP = tp.grad_ref(ids[k]);
      for (std::size_t i = 0; i < dP.size(); ++i) dP[i] += G[offsets[k] * cols + i];
    }
  });
}

Var mean_rows(Var a) {
  const Tensor& A = a.value();
  const std::size_t n = A.rows(), cols = A.cols();
  Tensor C(1, cols);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < cols; ++j) C(0, j) += A(r, j);
  if (n) for (double& v : C.data()) v /= static_cast<double>(n);
  const std::size_t ia = a.id;
  return a.tape->push(std::move(C), {ia}, [ia, n, cols](Tape& tp, std::size_t self) {
    if (n == 0) return;
    const Tensor G = tp.grad_ref(self);
    Tensor& dA = tp.grad_ref(ia);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < cols; ++j) dA(r, j) += G(0, j) * inv;
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().data()) s += v;
  const std::size_t ia = a.id;
  return a.tape->push(Tensor(1, 1, s), {ia}, [ia](Tape& tp, std::size_t self) {
    const double g = tp.grad_ref(self)(0, 0);
    for (double& v : tp.grad_ref(ia).data()) v += g;
  });
}

Var lookup_row(Var table, std::size_t index) {
  const Tensor& T = table.value();
  if (index >= T.rows())
    throw ShapeError("lookup_row: index " + std::to_string(index) + " outside " + std::to_string(T.rows()) + " rows");
  Tensor C = Tensor::row(T.row_vector(index));
  const std::size_t it = table.id;
  return table.tape->push(std::move(C), {it}, [it, index](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    Tensor& dT = tp.grad_ref(it);
    for (std::size_t j = 0; j < G.cols(); ++j) dT(index, j) += G(0, j);
  });
}

Var gather_rows(Var table, const std::vector<std::size_t>& indices) {
  const Tensor& T = table.value();
  const std::size_t cols = T.cols();
  Tensor C(indices.size(), cols);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= T.rows())
      throw ShapeError("gather_rows: index " + std::to_string(indices[r]) + " outside " + std::to_string(T.rows()) +
                       " rows");
    for (std::size_t j = 0; j < cols; ++j) C(r, j) = T(indices[r], j);
  }
  const std::size_t it = table.id;
  return table.tape->push(std::move(C), {it}, [it, indices, cols](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    Tensor& dT = tp.grad_ref(it);
    for (std::size_t r = 0; r < indices.size(); ++r)
      for (std::size_t j = 0; j < cols; ++j) dT(indices[r], j) += G(r, j);
  });
}

Var repeat_rows(Var row, std::size_t n) {
  const Tensor& R = row.value();
  if (R.rows() != 1) throw ShapeError("repeat_rows: input must be a single row");
  const std::size_t cols = R.cols();
  Tensor C(n, cols);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < cols; ++j) C(r, j) = R(0, j);
  const std::size_t ir = row.id;
  return row.tape->push(std::move(C), {ir}, [ir, n, cols](Tape& tp, std::size_t self) {
    const Tensor G = tp.grad_ref(self);
    Tensor& dR = tp.grad_ref(ir);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < cols; ++j) dR(0, j) += G(r, j);
  });
}

Var mse(Var a, Var b) {
  Tape& t = same_tape(a, b, "mse");
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (!A.same_shape(B)) shape_fail("mse", A, B);
  const std::size_t n = A.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    const double d = A[i] - B[i];
    s += d * d;
  }
  if (n) s /= static_cast<double>(n);
  const std::size_t ia = a.id, ib = b.id;
  return t.push(Tensor(1, 1, s), {ia, ib}, [ia, ib, n](Tape& tp, std::size_t self) {
    if (n == 0) return;
    const double g = tp.grad_ref(self)(0, 0) * 2.0 / static_cast<double>(n);
    const Tensor& Av = tp.value_at(ia);
    const Tensor& Bv = tp.value_at(ib);
    if (tp.needs_grad(ia)) {
      Tensor& dA = tp.grad_ref(ia);
      for (std::size_t i = 0; i < Av.size(); ++i) dA[i] += g * (Av[i] - Bv[i]);
    }
    if (tp.needs_grad(ib)) {
      Tensor& dB = tp.grad_ref(ib);
      for (std::size_t i = 0; i < Av.size(); ++i) dB[i] -= g * (Av[i] - Bv[i]);
    }
  });
}

Var bce(Var p, const Tensor& targets) {
  const Tensor& P = p.value();
  if (!P.same_shape(targets)) shape_fail("bce", P, targets);
  require_finite(targets, "bce targets");
  const std::size_t n = P.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = std::clamp(P[i], kBceEps, 1.0 - kBceEps);
    s -= targets[i] * std::log(q) + (1.0 - targets[i]) * std::log(1.0 - q);
  }
  if (n) s /= static_cast<double>(n);
  const std::size_t ip = p.id;
  return p.tape->push(Tensor(1, 1, s), {ip}, [ip, targets, n](Tape& tp, std::size_t self) {
    if (n == 0) return;
    const double g = tp.grad_ref(self)(0, 0) / static_cast<double>(n);
    const Tensor& Pv = tp.value_at(ip);
    Tensor& dP = tp.grad_ref(ip);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = Pv[i];
      // The clamp is flat outside the open interval.
      if (q < kBceEps || q > 1.0 - kBceEps) continue;
      dP[i] += g * (-targets[i] / q + (1.0 - targets[i]) / (1.0 - q));
    }
  });
}

Var cross_entropy(Var logits, std::size_t label) {
  const Tensor& L = logits.value();
  if (L.rows() != 1) throw ShapeError("cross_entropy: logits must be a single row");
  if (label >= L.cols()) throw ShapeError("cross_entropy: label outside logits");
  const auto row = L.row_span(0);
  const double mx = *std::max_element(row.begin(), row.end());
  double z = 0.0;
  for (double v : row) z += std::exp(v - mx);
  const double lse = mx + std::log(z);
  const std::size_t il = logits.id;
  return logits.tape->push(Tensor(1, 1, lse - L(0, label)), {il}, [il, label, lse](Tape& tp, std::size_t self) {
    const double g = tp.grad_ref(self)(0, 0);
    const Tensor& Lv = tp.value_at(il);
    Tensor& dL = tp.grad_ref(il);
    for (std::size_t j = 0; j < Lv.cols(); ++j)
      dL(0, j) += g * (std::exp(Lv(0, j) - lse) - (j == label ? 1.0 : 0.0));
  });
}

}  // namespace lg
