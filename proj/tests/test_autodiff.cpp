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

#include <doctest.h>

#include <cmath>
#include <random>

#include "gradcheck.hpp"
#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/checkpoint.hpp"
#include "layoutgraph/error.hpp"
#include "layoutgraph/kernels.hpp"
#include "layoutgraph/optim.hpp"

using namespace lg;
using lgtest::gradcheck;
using lgtest::random_tensor;

TEST_CASE("tensor shape checks") {
  CHECK_THROWS_AS(Tensor(2, 3, std::vector<double>(5)), ShapeError);
  Tensor t(2, 3, 1.5);
  CHECK(t.size() == 6);
  CHECK(t.shape() == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(t.item(), ShapeError);
  t(1, 2) = std::nan("");
  CHECK_FALSE(t.all_finite());
  CHECK_THROWS_AS(require_finite(t, "t"), ShapeError);
  CHECK(Tensor(0, 4).size() == 0);
}

TEST_CASE("primitive examples") {
  Tape tape;
  Var v = tape.constant(Tensor::row({0.3, -1.2, 4.0}));
  CHECK(mse(v, v).value().item() == 0.0);
  CHECK(bce(tape.constant(Tensor::scalar(0.5)), Tensor::scalar(1.0)).value().item() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(relu(tape.constant(Tensor::row({-1.0, 2.0}))).value() == Tensor::row({0.0, 2.0}));
  // Clamp floor: -log(1e-7).
  CHECK(bce(tape.constant(Tensor::scalar(0.0)), Tensor::scalar(1.0)).value().item() ==
        doctest::Approx(-std::log(kBceEps)));
}

TEST_CASE("op boundaries reject bad input") {
  Tape tape;
  Var a = tape.constant(Tensor(2, 3));
  Var b = tape.constant(Tensor(2, 2));
  CHECK_THROWS_AS(matmul(a, a), ShapeError);
  CHECK_THROWS_AS(add(a, b), ShapeError);
  CHECK_THROWS_AS(mul(a, b), ShapeError);
  CHECK_THROWS_AS(lookup_row(a, 2), ShapeError);
  CHECK_THROWS_AS(tape.constant(Tensor(1, 1, INFINITY)), ShapeError);
  CHECK_THROWS_AS(tape.backward(a), ShapeError);
  Tape other;
  CHECK_THROWS_AS(add(a, other.constant(Tensor(2, 3))), ValidationError);
  // exp overflow in a downstream op is caught at the op boundary
  Var big = tape.constant(Tensor::scalar(1e300));
  CHECK_THROWS_AS(mul(big, big), ShapeError);
}

TEST_CASE("x*x at 3 has gradient 6") {
  Tape tape;
  Var x = tape.leaf(Tensor::scalar(3.0));
  Var y = mul(x, x);
  tape.backward(y);
  CHECK(y.value().item() == 9.0);
  CHECK(tape.grad(x).item() == 6.0);
}

TEST_CASE("mse(XW, Y) gradient equals 2/N X^T (XW - Y)") {
  Rng rng(7);
  const std::size_t n = 5, k = 4, m = 3;
  Tensor X = random_tensor(rng, n, k), W = random_tensor(rng, k, m), Y = random_tensor(rng, n, m);
  Tape tape;
  Var w = tape.leaf(W);
  Var loss = mse(matmul(tape.constant(X), w), tape.constant(Y));
  tape.backward(loss);
  const Tensor g = tape.grad(w);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t j = 0; j < m; ++j) {
      double expect = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double xw = 0.0;
        for (std::size_t q = 0; q < k; ++q) xw += X(i, q) * W(q, j);
        expect += X(i, p) * (xw - Y(i, j));
      }
      expect *= 2.0 / n;
      CHECK(g(p, j) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("every primitive passes the finite-difference check") {
  Rng rng(11);
  auto A = random_tensor(rng, 3, 4);
  auto B = random_tensor(rng, 4, 2);
  auto C = random_tensor(rng, 3, 4);
  auto R = random_tensor(rng, 1, 4);
  auto P = random_tensor(rng, 3, 4, 0.2, 0.8);
  Tensor targets(3, 4);
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i % 3 == 0 ? 1.0 : 0.0;
  auto weights = random_tensor(rng, 3, 4);
  auto wsum = [&](Tape& t, Var v) {
    // Weighted sum so every output coordinate carries a distinct cotangent.
    Tensor w(v.rows(), v.cols());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = weights[i % weights.size()] + 0.1 * i;
    return sum(mul(v, t.constant(w)));
  };
  std::vector<std::pair<std::string, lgtest::GradCheck>> results;
  results.push_back({"matmul", gradcheck({A, B}, [&](Tape& t, auto& v) { return wsum(t, matmul(v[0], v[1])); })});
  results.push_back({"add", gradcheck({A, C}, [&](Tape& t, auto& v) { return wsum(t, add(v[0], v[1])); })});
  results.push_back({"add-broadcast", gradcheck({A, R}, [&](Tape& t, auto& v) { return wsum(t, add(v[0], v[1])); })});
  results.push_back({"sub", gradcheck({A, C}, [&](Tape& t, auto& v) { return wsum(t, sub(v[0], v[1])); })});
  results.push_back({"mul", gradcheck({A, C}, [&](Tape& t, auto& v) { return wsum(t, mul(v[0], v[1])); })});
  results.push_back({"scale", gradcheck({A}, [&](Tape& t, auto& v) { return wsum(t, scale(v[0], -2.5)); })});
  results.push_back({"relu", gradcheck({A}, [&](Tape& t, auto& v) { return wsum(t, relu(v[0])); })});
  results.push_back({"sigmoid", gradcheck({A}, [&](Tape& t, auto& v) { return wsum(t, sigmoid(v[0])); })});
  results.push_back({"softmax", gradcheck({A}, [&](Tape& t, auto& v) { return wsum(t, softmax(v[0])); })});
  results.push_back({"concat", gradcheck({A, B}, [&](Tape& t, auto& v) {
                       return wsum(t, concat({v[0], matmul(v[0], v[1])}));
                     })});
  results.push_back({"concat_rows", gradcheck({A, R}, [&](Tape& t, auto& v) {
                       return sum(mul(concat_rows({v[0], v[1]}), concat_rows({v[0], v[1]})));
                     })});
  results.push_back({"mean_rows", gradcheck({A}, [&](Tape& t, auto& v) { return wsum(t, repeat_rows(mean_rows(v[0]), 3)); })});
  results.push_back({"lookup_row", gradcheck({A}, [&](Tape& t, auto& v) {
                       return wsum(t, concat_rows({lookup_row(v[0], 2), lookup_row(v[0], 0), lookup_row(v[0], 2)}));
                     })});
  results.push_back({"gather_rows", gradcheck({A}, [&](Tape& t, auto& v) {
                       return wsum(t, gather_rows(v[0], {1, 1, 2}));
                     })});
  results.push_back({"mse", gradcheck({A, C}, [&](Tape&, auto& v) { return mse(v[0], v[1]); })});
  results.push_back({"bce", gradcheck({P}, [&](Tape&, auto& v) { return bce(v[0], targets); })});
  results.push_back({"cross_entropy", gradcheck({R}, [&](Tape&, auto& v) { return cross_entropy(v[0], 1); })});
  for (const auto& [name, r] : results) {
    INFO(name);
    CHECK(r.checked > 0);
    CHECK(r.max_rel < 1e-4);
  }
}

TEST_CASE("property: random compositions pass the finite-difference check") {
  std::mt19937_64 seeds(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Rng rng(seeds());
    const std::size_t depth = 1 + rng.below(5);
    std::vector<std::size_t> dims{1 + rng.below(16)};
    for (std::size_t d = 0; d < depth; ++d) dims.push_back(1 + rng.below(16));
    const std::size_t rows = 1 + rng.below(4);
    std::vector<Tensor> inputs{random_tensor(rng, rows, dims[0])};
    for (std::size_t d = 0; d < depth; ++d) inputs.push_back(random_tensor(rng, dims[d], dims[d + 1]));
    std::vector<int> acts;
    for (std::size_t d = 0; d < depth; ++d) acts.push_back(static_cast<int>(rng.below(3)));
    Tensor target = random_tensor(rng, rows, dims.back());
    auto r = gradcheck(inputs, [&](Tape& t, const std::vector<Var>& v) {
      Var h = v[0];
      for (std::size_t d = 0; d < depth; ++d) {
        h = matmul(h, v[d + 1]);
        h = acts[d] == 0 ? relu(h) : acts[d] == 1 ? sigmoid(h) : h;
      }
      return mse(h, t.constant(target));
    });
    INFO("trial " << trial);
    CHECK(r.max_rel < 1e-4);
    CHECK(r.kinks * 100 <= r.checked + r.kinks);
  }
}

TEST_CASE("softmax rows sum to one and sigmoid stays in (0,1)") {
  Rng rng(3);
  Tape tape;
  Var s = softmax(tape.constant(random_tensor(rng, 6, 9, -30.0, 30.0)));
  for (std::size_t r = 0; r < 6; ++r) {
    double total = 0.0;
    for (double v : s.value().row_span(r)) total += v;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  Var g = sigmoid(tape.constant(random_tensor(rng, 4, 4, -20.0, 20.0)));
  for (double v : g.value().data()) CHECK((v > 0.0 && v < 1.0));
}

TEST_CASE("zero-row tensors flow through mean_rows") {
  Tape tape;
  Var z = tape.leaf(Tensor(0, 3));
  Var m = mean_rows(z);
  CHECK(m.value() == Tensor(1, 3));
  Var w = tape.leaf(Tensor(3, 2, 1.0));
  Var out = sum(matmul(z, w));
  tape.backward(out);
  CHECK(tape.grad(w) == Tensor(3, 2));
}

TEST_CASE("parameters bind once per tape and gradients collect by id") {
  ParamStore store;
  Rng rng(5);
  ParamId a = store.add("a", xavier_uniform(2, 2, rng));
  ParamId b = store.add("b", Tensor(1, 2, 1.0));
  CHECK_THROWS_AS(store.add("a", Tensor(1, 1)), ValidationError);
  CHECK_THROWS_AS(store.find("zzz"), NotFoundError);
  Tape tape;
  CHECK(tape.param(store, a).id == tape.param(store, a).id);
  Var out = sum(add(tape.param(store, a), tape.param(store, a)));
  tape.backward(out);
  Gradients g(store.size());
  tape.collect(g);
  CHECK(*g.get(a) == Tensor(2, 2, 2.0));
  CHECK(g.get(b) == nullptr);
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  Rng rng(9);
  const std::size_t n = 70, k = 90, m = 60;
  Tensor A = random_tensor(rng, n, k), B = random_tensor(rng, k, m), Bt = random_tensor(rng, m, k);
  Tensor G = random_tensor(rng, n, m);
  kernels::set_num_threads(4);
  Tensor c1(n, m), c2(n, m);
  kernels::matmul_serial(A.data().data(), B.data().data(), c1.data().data(), n, k, m);
  kernels::matmul(A.data().data(), B.data().data(), c2.data().data(), n, k, m);
  CHECK(c1 == c2);
  Tensor d1(n, m, 0.5), d2(n, m, 0.5);
  kernels::matmul_nt_acc_serial(A.data().data(), Bt.data().data(), d1.data().data(), n, k, m);
  kernels::matmul_nt_acc(A.data().data(), Bt.data().data(), d2.data().data(), n, k, m);
  CHECK(d1 == d2);
  Tensor e1(k, m), e2(k, m);
  kernels::matmul_tn_acc_serial(A.data().data(), G.data().data(), e1.data().data(), n, k, m);
  kernels::matmul_tn_acc(A.data().data(), G.data().data(), e2.data().data(), n, k, m);
  CHECK(e1 == e2);
  kernels::set_num_threads(0);
}

TEST_CASE("adam: zero gradient from fresh state leaves parameters unchanged") {
  ParamStore store;
  store.add("w", Tensor::row({1.0, -2.0}));
  AdamState st;
  adam_step(store, Gradients(1), st, AdamConfig{});
  CHECK(store.value(0) == Tensor::row({1.0, -2.0}));
  CHECK(st.step == 1);
  // Moments decay once they are nonzero.
  Gradients g(1);
  g.grads[0] = Tensor::row({1.0, 1.0});
  adam_step(store, g, st, AdamConfig{});
  const double m1 = st.m[0][0];
  adam_step(store, Gradients(1), st, AdamConfig{});
  CHECK(st.m[0][0] == doctest::Approx(0.9 * m1).epsilon(1e-15));
}

TEST_CASE("adam: single step matches a hand trace") {
  // m = 0.1 g, v = 0.001 g^2; bias correction divides by 0.1 and 0.001,
  // so the first update is lr * g / (|g| + eps) = lr * sign(g) (up to eps).
  ParamStore store;
  store.add("w", Tensor::row({0.5}));
  Gradients g(1);
  g.grads[0] = Tensor::row({0.2});
  AdamState st;
  AdamConfig cfg;
  cfg.lr = 0.01;
  adam_step(store, g, st, cfg);
  CHECK(st.m[0][0] == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(st.v[0][0] == doctest::Approx(0.00004).epsilon(1e-12));
  CHECK(store.value(0)[0] == doctest::Approx(0.5 - 0.01 * 0.2 / (0.2 + 1e-8)).epsilon(1e-14));
  // Second step: m = 0.9*0.02 + 0.1*(-0.1), v = 0.999*4e-5 + 0.001*0.01.
  g.grads[0] = Tensor::row({-0.1});
  const double w1 = store.value(0)[0];
  adam_step(store, g, st, cfg);
  const double m = 0.9 * 0.02 + 0.1 * -0.1, v = 0.999 * 4e-5 + 0.001 * 0.01;
  const double mhat = m / (1 - 0.81), vhat = v / (1 - 0.999 * 0.999);
  CHECK(store.value(0)[0] == doctest::Approx(w1 - 0.01 * mhat / (std::sqrt(vhat) + 1e-8)).epsilon(1e-13));
}

TEST_CASE("adam: convex quadratic decreases monotonically after warmup") {
  ParamStore store;
  store.add("w", Tensor::row({3.0, -2.0, 1.0}));
  AdamState st;
  AdamConfig cfg;
  cfg.lr = 0.05;
  std::vector<double> losses;
  for (int step = 0; step < 100; ++step) {
    Tape tape;
    Var w = tape.param(store, 0);
    Var loss = mse(w, tape.constant(Tensor(1, 3)));
    losses.push_back(loss.value().item());
    tape.backward(loss);
    Gradients g(1);
    tape.collect(g);
    adam_step(store, g, st, cfg);
  }
  for (std::size_t i = 10; i < losses.size(); ++i) CHECK(losses[i] < losses[i - 1]);
  CHECK(losses.back() < losses.front());
}

TEST_CASE("adam rejects mismatched gradients") {
  ParamStore store;
  store.add("w", Tensor::row({1.0}));
  AdamState st;
  Gradients g(1);
  g.grads[0] = Tensor::row({1.0, 2.0});
  CHECK_THROWS_AS(adam_step(store, g, st, AdamConfig{}), ShapeError);
  CHECK_THROWS_AS(adam_step(store, Gradients(2), st, AdamConfig{}), ShapeError);
  AdamConfig bad;
  bad.lr = 0.0;
  CHECK_THROWS_AS(adam_step(store, Gradients(1), st, bad), ValidationError);
}

TEST_CASE("checkpoint round-trip is bit-exact") {
  ParamStore store;
  Rng rng(1);
  store.add("embed.pos", xavier_uniform(5, 3, rng));
  store.add("empty", Tensor(0, 4));
  Tensor odd = Tensor::row({-0.0, 1e-310, 0.1, -1e300});
  store.add("odd", odd);
  Checkpoint ck = checkpoint_from_params(store, {{"seed", 42}, {"node_dim", 8}});
  const std::string bytes = checkpoint_to_bytes(ck);
  CHECK(bytes.substr(0, 8) == "LGRAPHCK");
  Checkpoint back = checkpoint_from_bytes(bytes);
  CHECK(back.meta == ck.meta);
  REQUIRE(back.entries.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.entries[i].first == ck.entries[i].first);
    const auto& x = back.entries[i].second;
    const auto& y = ck.entries[i].second;
    REQUIRE(x.same_shape(y));
    CHECK(std::memcmp(x.data().data(), y.data().data(), x.size() * sizeof(double)) == 0);
  }
  CHECK(checkpoint_to_bytes(back) == bytes);
  ParamStore other;
  other.add("embed.pos", Tensor(5, 3));
  other.add("empty", Tensor(0, 4));
  other.add("odd", Tensor(1, 4));
  load_params(other, back);
  CHECK(std::signbit(other.value(2)[0]));
  CHECK(other.value(0) == store.value(0));
}

TEST_CASE("checkpoint rejects malformed containers") {
  CHECK_THROWS_AS(checkpoint_from_bytes("nope"), ParseError);
  CHECK_THROWS_AS(checkpoint_from_bytes("XXXXXXXX\x01\0\0\0"), ParseError);
  ParamStore store;
  store.add("w", Tensor(2, 2, 1.0));
  std::string bytes = checkpoint_to_bytes(checkpoint_from_params(store, {}));
  CHECK_THROWS_AS(checkpoint_from_bytes(bytes.substr(0, bytes.size() - 1)), ParseError);
  CHECK_THROWS_AS(checkpoint_from_bytes(bytes + "x"), ParseError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/dir/ck.bin"), IoError);
  ParamStore wrong;
  wrong.add("w", Tensor(3, 2));
  CHECK_THROWS_AS(load_params(wrong, checkpoint_from_bytes(bytes)), ShapeError);
}
