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
#include "layoutgraph/error.hpp"
#include "layoutgraph/objective.hpp"
#include "objective_oracle.hpp"

using namespace lg;

TEST_CASE("element_loss examples") {
  auto same = element_loss({{10, 10, 20, 20}}, {{10, 10, 20, 20}}, 100, 100, 1.0);
  CHECK(same.mse == 0.0);
  CHECK(same.boundary == 0.0);
  CHECK(element_loss({{-5, 10, 20, 20}}, {{0, 10, 20, 20}}, 100, 100, 1.0).boundary == 5.0);
  CHECK(element_loss({{90, 90, 20, 20}}, {{90, 90, 20, 20}}, 100, 100, 2.0).boundary == 40.0);
  CHECK_THROWS_AS(element_loss({{0, 0, 1, 1}}, {}, 100, 100, 1.0), ValidationError);
}

TEST_CASE("constraint_loss examples") {
  CHECK(constraint_loss({1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(-std::log(1 - 1e-7)));
  CHECK(constraint_loss({0.5, 0.5, 0.5}, {1, 0, 1}) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(constraint_loss({0.0}, {1.0}) == doctest::Approx(-std::log(1e-7)).epsilon(1e-12));  // 16.118
  CHECK(constraint_loss({}, {}) == 0.0);
  CHECK_THROWS_AS(constraint_loss({0.5}, {}), ValidationError);
}

TEST_CASE("total_loss: perfect inputs and linearity in lambda") {
  auto r = total_loss({{1, 2, 3, 4}}, {{1, 2, 3, 4}}, {1.0}, {1.0}, 10, 10, LossWeights{});
  CHECK(r.total == doctest::Approx(0.0).epsilon(1e-6));
  LossWeights w1, w2;
  w2.lambda = 2.0;
  auto a = total_loss({{1, 2, 3, 4}}, {{0, 2, 3, 5}}, {0.3}, {1.0}, 10, 10, w1);
  auto b = total_loss({{1, 2, 3, 4}}, {{0, 2, 3, 5}}, {0.3}, {1.0}, 10, 10, w2);
  CHECK(b.total - a.total == doctest::Approx(a.constraint_bce).epsilon(1e-14));
  LossWeights bad;
  bad.eta = 0.0;
  CHECK_THROWS_AS(total_loss({}, {}, {}, {}, 10, 10, bad), ValidationError);
}

TEST_CASE("property: scalar and differentiable objectives match an independent recomputation") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-0.3, 1.3), P(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 5, k = rng() % 6;
    const double W = 0.5 + P(rng), H = 0.5 + P(rng);
    LossWeights w;
    w.lambda = 0.1 + 3 * P(rng);
    w.eta = 0.1 + 3 * P(rng);
    std::vector<Box4> pred(n), truth(n);
    Tensor pt(n, 4), tt(n, 4);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        pt(i, j) = pred[i][j] = U(rng);
        tt(i, j) = truth[i][j] = U(rng);
      }
    std::vector<double> p(k), c(k);
    Tensor ptens(k, 1), ctens(k, 1);
    for (std::size_t i = 0; i < k; ++i) {
      ptens[i] = p[i] = trial % 10 == 0 ? (rng() % 2 ? 0.0 : 1.0) : P(rng);
      ctens[i] = c[i] = static_cast<double>(rng() % 2);
    }
    const auto o = oracle::objective(pred, truth, p, c, W, H, w.lambda, w.eta);
    const auto r = total_loss(pred, truth, p, c, W, H, w);
    Tape tape;
    const auto v = total_loss(tape, tape.leaf(pt), tt, tape.leaf(ptens), ctens, W, H, w).report();
    for (const auto& x : {r, v}) {
      CHECK(std::abs(x.total - o.total) <= 1e-12);
      CHECK(std::abs(x.element_mse - o.mse) <= 1e-12);
      CHECK(std::abs(x.boundary - o.boundary) <= 1e-12);
      CHECK(std::abs(x.constraint_bce - o.bce) <= 1e-12);
      CHECK(x.total >= 0.0);
    }
    if (trial % 100 == 0) CHECK(r.total == v.total);
  }
}

TEST_CASE("d total / d lambda equals the bce term") {
  std::vector<Box4> pred{{0.1, 0.2, 0.5, 0.4}}, truth{{0.0, 0.25, 0.45, 0.5}};
  std::vector<double> p{0.3, 0.8}, c{1, 0};
  LossWeights w;
  w.lambda = 1.5;
  const double h = 1e-3;
  LossWeights lo = w, hi = w;
  lo.lambda -= h;
  hi.lambda += h;
  const double fd = (total_loss(pred, truth, p, c, 1, 1, hi).total - total_loss(pred, truth, p, c, 1, 1, lo).total) / (2 * h);
  CHECK(lgtest::rel_err(fd, total_loss(pred, truth, p, c, 1, 1, w).constraint_bce) < 1e-4);
}

TEST_CASE("boundary gradient is +-eta per violated face") {
  const double eta = 2.5;
  Tape tape;
  // Left and bottom faces violated, right and top inside.
  Var pred = tape.leaf(Tensor::row({-3.0, 50.0, 20.0, 60.0}));
  Var b = boundary_penalty(tape, pred, 100, 100, eta);
  CHECK(b.value().item() == doctest::Approx(eta * (3 + 10)));
  tape.backward(b);
  CHECK(tape.grad(pred) == Tensor::row({-eta, eta, 0.0, eta}));
  auto r = lgtest::gradcheck({Tensor::row({-3.0, 50.0, 20.0, 60.0})},
                             [&](Tape& t, auto& v) { return boundary_penalty(t, v[0], 100, 100, eta); });
  CHECK(r.max_rel < 1e-4);
  CHECK(r.kinks == 0);
}

TEST_CASE("loss csv rows") {
  CHECK(loss_csv_header() == "step,total,mse,boundary,bce");
  CHECK(loss_csv_row(3, LossReport{1.5, 0.5, 0.25, 0.75}) == "3,1.5,0.5,0.25,0.75");
}
