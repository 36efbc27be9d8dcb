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

#include <set>

#include "layoutgraph/error.hpp"
#include "layoutgraph/kernels.hpp"
#include "layoutgraph/synth.hpp"
#include "layoutgraph/tasks.hpp"
#include "layoutgraph/train.hpp"
#include "net_support.hpp"

using namespace lg;

namespace {

TrainConfig small_cfg(TrainTask task) {
  TrainConfig cfg;
  cfg.task = task;
  cfg.epochs = 2;
  cfg.batch = 4;
  cfg.chunks_per_gui = 2;
  cfg.seed = 5;
  return cfg;
}

std::string trained_bytes(const std::vector<Gui>& guis, const TrainConfig& cfg, std::size_t* steps = nullptr) {
  LayoutNet net(net_config_for(guis, lgtest::toy_config()), 3, corpus_stats(guis));
  const auto r = train(net, guis, cfg);
  if (steps) *steps = r.steps;
  return checkpoint_to_bytes(net.to_checkpoint({}));
}

}  // namespace

TEST_CASE("train: bit-identical for a seed, any thread count") {
  const auto guis = gen_synthetic(8, 6);
  for (TrainTask task : {TrainTask::Autocomplete, TrainTask::Classify}) {
    const auto cfg = small_cfg(task);
    const std::string a = trained_bytes(guis, cfg);
    CHECK(trained_bytes(guis, cfg) == a);
    kernels::set_num_threads(2);
    CHECK(trained_bytes(guis, cfg) == a);
    kernels::set_num_threads(0);
    auto other = cfg;
    other.seed = 6;
    CHECK(trained_bytes(guis, other) != a);
    const LayoutNet fresh(net_config_for(guis, lgtest::toy_config()), 3, corpus_stats(guis));
    CHECK(checkpoint_to_bytes(fresh.to_checkpoint({})) != a);
  }
}

TEST_CASE("train: step count and callback") {
  const auto guis = gen_synthetic(9, 6);
  auto cfg = small_cfg(TrainTask::Classify);
  // Classification uses the complete GUI plus one partial draw: 12 samples.
  LayoutNet net(net_config_for(guis, lgtest::toy_config()), 3);
  std::vector<std::size_t> seen;
  const auto r = train(net, guis, cfg, [&](std::size_t step, const LossReport& rep) {
    seen.push_back(step);
    CHECK(std::isfinite(rep.total));
    CHECK(rep.total >= 0.0);
  });
  CHECK(r.steps == 2 * 3);
  CHECK(seen.size() == r.steps);
  CHECK(seen.back() == r.steps);

  cfg.epochs = 0;
  const std::string before = checkpoint_to_bytes(net.to_checkpoint({}));
  CHECK(train(net, guis, cfg).steps == 0);
  CHECK(checkpoint_to_bytes(net.to_checkpoint({})) == before);
}

TEST_CASE("train: autocomplete loss falls") {
  const auto guis = gen_synthetic(10, 16);
  LayoutNet net(net_config_for(guis, lgtest::toy_config(16)), 4, corpus_stats(guis));
  auto cfg = small_cfg(TrainTask::Autocomplete);
  cfg.epochs = 1;
  const double first = train(net, guis, cfg).last_epoch.total;
  cfg.epochs = 6;
  const auto later = train(net, guis, cfg).last_epoch;
  CHECK(later.total < first);
  CHECK(later.total == doctest::Approx(later.element_mse + later.boundary + later.constraint_bce));
}

TEST_CASE("train: classifier fits a small corpus") {
  const auto guis = gen_synthetic(12, 16);
  LayoutNet net(net_config_for(guis, lgtest::toy_config(16)), 4);
  auto cfg = small_cfg(TrainTask::Classify);
  cfg.epochs = 30;
  train(net, guis, cfg);
  int right = 0;
  for (const Gui& g : guis) right += classify(net, g).label == *g.topic;
  CHECK(right >= 14);
}

TEST_CASE("train: invalid input") {
  const auto guis = gen_synthetic(1, 4);
  LayoutNet net(net_config_for(guis, lgtest::toy_config()), 1);
  auto cfg = small_cfg(TrainTask::Autocomplete);
  CHECK_THROWS_AS(train(net, {}, cfg), ValidationError);
  cfg.batch = 0;
  CHECK_THROWS_AS(train(net, guis, cfg), ValidationError);
  cfg = small_cfg(TrainTask::Classify);
  auto untopical = guis;
  untopical[0].topic.reset();
  CHECK_THROWS_AS(train(net, untopical, cfg), ValidationError);
  CHECK(train_task_from_string("classify") == TrainTask::Classify);
  CHECK_THROWS_AS(train_task_from_string("segment"), ValidationError);
}

TEST_CASE("split_indices: partition") {
  for (std::size_t n : {0u, 1u, 7u, 100u}) {
    const auto [tr, te] = split_indices(n, 0.15, 9);
    CHECK(te.size() == static_cast<std::size_t>(std::lround(0.15 * static_cast<double>(n))));
    std::set<std::size_t> all(tr.begin(), tr.end());
    all.insert(te.begin(), te.end());
    CHECK(all.size() == n);
    CHECK(tr.size() + te.size() == n);
    CHECK(split_indices(n, 0.15, 9) == std::make_pair(tr, te));
  }
  CHECK(split_indices(100, 0.15, 9) != split_indices(100, 0.15, 10));
  CHECK_THROWS_AS(split_indices(10, 1.5, 1), ValidationError);
}

TEST_CASE("corpus helpers") {
  const auto guis = gen_synthetic(2, 5);
  CHECK(corpus_hash(guis) == corpus_hash(gen_synthetic(2, 5)));
  CHECK(corpus_hash(guis).size() == 16);
  auto moved = guis;
  moved[0].elements[0].bbox->x += 1;
  CHECK(corpus_hash(moved) != corpus_hash(guis));
  const auto cfg = net_config_for(guis, lgtest::toy_config());
  CHECK(cfg.embed.max_coord == 640);
  CHECK(cfg.topics == std::vector<std::string>{"chat", "gallery", "login", "news_feed", "settings"});
}
