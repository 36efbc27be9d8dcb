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
#include <set>

#include "layoutgraph/error.hpp"
#include "layoutgraph/eval.hpp"
#include "layoutgraph/synth.hpp"
#include "test_support.hpp"

using namespace lg;
using lgtest::gui_of;
using lgtest::placed;

TEST_CASE("pos_error: worked values") {
  CHECK(pos_error({0, 0, 20, 20}, {0, 0, 20, 20}, 100, 100) == 0.0);
  CHECK(pos_error({80, 80, 20, 20}, {0, 0, 20, 20}, 100, 100) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pos_error({40, 0, 20, 20}, {0, 0, 20, 20}, 100, 100) == doctest::Approx(40 / (80 * std::sqrt(2.0))));
  CHECK(pos_error({40, 0, 20, 20}, {0, 0, 20, 20}, 100, 100) == doctest::Approx(0.3536).epsilon(1e-4));
  // Box fills the canvas.
  CHECK(pos_error({0, 0, 100, 100}, {0, 0, 100, 100}, 100, 100) == 0.0);
  CHECK(pos_error({0, 0, 100, 100}, {3, 0, 50, 100}, 100, 100) == 1.0);
  // Capped at 1 when the truth sits beyond the predicted box's range.
  CHECK(pos_error({0, 0, 90, 90}, {90, 90, 10, 10}, 100, 100) == 1.0);
}

TEST_CASE("area_error: worked values and symmetry") {
  CHECK(area_error({0, 0, 10, 10}, {5, 5, 10, 10}) == 0.0);
  CHECK(area_error({0, 0, 10, 10}, {0, 0, 20, 20}) == 0.75);
  CHECK(area_error({0, 0, 20, 20}, {0, 0, 10, 10}) == 0.75);
  CHECK(area_error({0, 0, 5, 20}, {0, 0, 10, 10}) == 0.0);
}

TEST_CASE("align_error: proportions") {
  ConstraintNode left;
  left.kind = ConstraintKind::Alignment;
  left.align = AlignKind::Left;
  left.line = 10;
  ConstraintNode top = left;
  top.align = AlignKind::Top;
  top.line = 50;
  CHECK(align_error({10, 50, 5, 5}, {left, top}, 0) == 0.0);
  CHECK(align_error({10, 90, 5, 5}, {left, top}, 0) == 0.5);
  CHECK(align_error({12, 90, 5, 5}, {left, top}, 2) == 0.5);
  CHECK(align_error({40, 90, 5, 5}, {left, top}, 2) == 1.0);
  CHECK(align_error({40, 90, 5, 5}, {}, 2) == 0.0);
}

TEST_CASE("metrics stay in [0, 1] and vanish only when exact") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const int W = lgtest::uniform_int(rng, 20, 400), H = lgtest::uniform_int(rng, 20, 400);
    auto box = [&] {
      const int w = lgtest::uniform_int(rng, 1, W), h = lgtest::uniform_int(rng, 1, H);
      return BBox{lgtest::uniform_int(rng, 0, W - w), lgtest::uniform_int(rng, 0, H - h), w, h};
    };
    const BBox a = box(), b = box();
    const double p = pos_error(a, b, W, H), ar = area_error(a, b);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(ar >= 0.0);
    CHECK(ar <= 1.0);
    CHECK((p == 0.0) == (a.x == b.x && a.y == b.y));
    CHECK((ar == 0.0) == (a.w * a.h == b.w * b.h));
  }
}

TEST_CASE("make_pairs: counts, contiguity and determinism") {
  Gui g = gui_of(200, 200, {placed("a", "Text", 0, 0, 10, 10), placed("b", "Text", 20, 0, 10, 10),
                            placed("c", "Text", 0, 40, 10, 10), placed("d", "Text", 20, 40, 10, 10),
                            placed("e", "Text", 0, 80, 10, 10)});
  const auto order = reading_order(g);
  CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto pairs = make_pairs(g, 9, 40);
  std::map<std::size_t, std::vector<const PairSample*>> draws;
  for (const auto& p : pairs) draws[p.draw].push_back(&p);
  CHECK(draws.size() <= 40);
  for (const auto& [d, ps] : draws) {
    const Gui& partial = ps.front()->partial;
    const std::size_t k = partial.elements.size();
    CHECK(k >= 1);
    CHECK(k <= 4);
    CHECK(ps.size() == 5 - k);
    // Kept elements form one run in reading order.
    std::vector<std::size_t> pos;
    for (const auto& e : partial.elements)
      for (std::size_t i = 0; i < order.size(); ++i)
        if (g.elements[order[i]].id == e.id) pos.push_back(i);
    std::sort(pos.begin(), pos.end());
    CHECK(pos.back() - pos.front() + 1 == k);
    std::set<std::string> seen;
    for (const auto* p : ps) {
      CHECK(partial.find(p->target.id) == nullptr);
      CHECK(seen.insert(p->target.id).second);
    }
  }
  CHECK(pairs_to_json(make_pairs(g, 9, 40)) == pairs_to_json(pairs));
  CHECK(pairs_to_json(make_pairs(g, 10, 40)) != pairs_to_json(pairs));
  const auto uni = make_pairs(g, 9, 40, ChunkMode::Uniform);
  std::size_t per_draw = 0;
  for (const auto& p : uni)
    if (p.draw == 0) ++per_draw;
  CHECK(per_draw == 5 - uni.front().partial.elements.size());
}

TEST_CASE("make_pairs: rejects small or incomplete GUIs") {
  Gui g = gui_of(100, 100, {placed("a", "Text", 0, 0, 10, 10), placed("b", "Text", 20, 0, 10, 10),
                            placed("c", "Text", 0, 40, 10, 10)});
  CHECK_THROWS_AS(make_pairs(g, 1, 1), ValidationError);
  g.elements.push_back(lgtest::unplaced("d", "Text", 1.0));
  CHECK_THROWS_AS(make_pairs(g, 1, 1), ValidationError);
}

TEST_CASE("pairs JSON round trip") {
  const auto guis = gen_synthetic(4, 6);
  const auto pairs = make_dataset_pairs(guis, 1, 3);
  const std::string bytes = pairs_to_json(pairs);
  const auto back = pairs_from_json(bytes);
  REQUIRE(back.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(back[i].gui == pairs[i].gui);
    CHECK(back[i].draw == pairs[i].draw);
    CHECK(back[i].partial == pairs[i].partial);
    CHECK(back[i].target == pairs[i].target);
  }
  CHECK(pairs_to_json(back) == bytes);
  CHECK_THROWS_AS(pairs_from_json("[]"), ParseError);
  CHECK_THROWS_AS(pairs_from_json("{\"pairs\":[{}]}"), ParseError);
  CHECK_THROWS_AS(pairs_from_json("{"), ParseError);
}

TEST_CASE("kfold: partition, balance, determinism") {
  const FoldPlan ten = kfold(10, 5, 3);
  for (int f = 0; f < 5; ++f) CHECK(ten.fold(f).size() == 2);
  for (std::size_t n : {5u, 7u, 13u, 101u}) {
    const FoldPlan p = kfold(n, 5, 8);
    std::size_t lo = n, hi = 0, total = 0;
    for (int f = 0; f < 5; ++f) {
      const auto s = p.fold(f).size();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
      total += s;
      CHECK(p.fold(f).size() + p.complement(f).size() == n);
    }
    CHECK(total == n);
    CHECK(hi - lo <= 1);
    CHECK(kfold(n, 5, 8).assignments == p.assignments);
  }
  CHECK(kfold(10, 5, 4).assignments != ten.assignments);
  CHECK_THROWS_AS(kfold(4, 5, 1), ValidationError);
  CHECK_THROWS_AS(kfold(4, 1, 1), ValidationError);
}

TEST_CASE("synthetic corpus: valid, deterministic, eight topics") {
  const auto a = gen_synthetic(17, 64);
  const auto b = gen_synthetic(17, 64);
  CHECK(a == b);
  CHECK(gen_synthetic(18, 64) != a);
  std::set<std::string> topics;
  for (const Gui& g : a) {
    CHECK_NOTHROW(validate(g));
    CHECK(g.elements.size() >= 4);
    for (const auto& e : g.elements) CHECK(inside_canvas(*e.bbox, g.canvas_w, g.canvas_h));
    topics.insert(*g.topic);
  }
  CHECK(topics.size() == 8);
  CHECK_THROWS_AS(gen_synthetic(1, 0), ValidationError);
}

TEST_CASE("synthetic gallery: every grid row and column is recovered") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const Gui g = synth_gui(rng, 1);
    std::map<int, std::vector<std::string>> cols, rows;
    for (const auto& e : g.elements) {
      if (e.kind != "Image") continue;
      cols[e.bbox->x].push_back(e.id);
      rows[e.bbox->y].push_back(e.id);
    }
    const auto cs = extract_all(g);
    auto covered = [&](AlignKind k, const std::vector<std::string>& ids) {
      for (const auto& c : cs) {
        if (c.kind != ConstraintKind::Alignment || c.align != k) continue;
        if (std::all_of(ids.begin(), ids.end(), [&](const std::string& id) {
              return std::find(c.members.begin(), c.members.end(), id) != c.members.end();
            }))
          return true;
      }
      return false;
    };
    for (const auto& [x, ids] : cols) CHECK(covered(AlignKind::Left, ids));
    for (const auto& [y, ids] : rows) CHECK(covered(AlignKind::Top, ids));
  }
}

TEST_CASE("jitter keeps boxes on the canvas and sizes fixed") {
  Rng rng(1);
  const auto guis = gen_synthetic(2, 16);
  for (const Gui& g : guis) {
    const Gui j = jitter(g, rng, 4);
    for (std::size_t i = 0; i < g.elements.size(); ++i) {
      const BBox& a = *g.elements[i].bbox;
      const BBox& b = *j.elements[i].bbox;
      CHECK(a.w == b.w);
      CHECK(std::abs(a.x - b.x) <= 4);
      CHECK(inside_canvas(b, g.canvas_w, g.canvas_h));
    }
  }
}

TEST_CASE("truth flags follow extraction with the target in place") {
  Gui partial = gui_of(360, 640, {placed("a", "ListItem", 20, 100, 200, 40), placed("b", "ListItem", 20, 150, 200, 40),
                                  placed("z", "Icon", 300, 500, 20, 20)});
  const LayoutGraph g = build_graph(partial, extract_all(partial));
  Element t = placed("t", "ListItem", 20, 200, 200, 40);
  const auto flags = truth_flags(partial, g, t, {});
  REQUIRE(flags.size() == g.constraint_count());
  for (std::size_t j = 0; j < flags.size(); ++j) {
    const auto& c = g.constraints[j];
    const bool touches_z = std::find(c.members.begin(), c.members.end(), "z") != c.members.end();
    CHECK(flags[j] == (touches_z ? 0.0 : 1.0));
  }
  Element off = placed("t", "ListItem", 130, 400, 100, 30);
  for (double f : truth_flags(partial, g, off, {})) CHECK(f == 0.0);
  const auto al = truth_alignments(partial, t, {});
  CHECK(al.size() == 3);  // left, right and middle of the column
  CHECK(align_error(*t.bbox, al, 2) == 0.0);
}

TEST_CASE("evaluate: oracle is exactly zero, centre baseline is not") {
  const auto guis = gen_synthetic(21, 24);
  const auto pairs = make_dataset_pairs(guis, 5, 4);
  const MetricReport oracle = evaluate(OraclePlacer{}, pairs);
  CHECK(oracle.overall.count == pairs.size());
  CHECK(oracle.overall.pos == 0.0);
  CHECK(oracle.overall.area == 0.0);
  CHECK(oracle.overall.align == 0.0);
  std::size_t total = 0;
  for (const auto& [k, s] : oracle.buckets) {
    CHECK(k >= 1);
    CHECK(s.pos_mean() == 0.0);
    CHECK(s.area_mean() == 0.0);
    CHECK(s.align_mean() == 0.0);
    total += s.count;
  }
  CHECK(total == pairs.size());
  const MetricReport center = evaluate(CenterPlacer{}, pairs);
  CHECK(center.overall.pos_mean() > 0.0);
  CHECK(center.overall.area_mean() > 0.0);
  CHECK(center.overall.align_mean() > 0.0);
  const auto j = to_json(center);
  CHECK(j["overall"]["count"] == pairs.size());
  CHECK(j["buckets"].size() == center.buckets.size());
  CHECK(j["buckets"][0].contains("placed"));
}

namespace {

class FarModel final : public TargetModel {
 public:
  std::vector<TargetPrediction> predict(const LayoutGraph& graph,
                                        const std::vector<const Element*>& targets) const override {
    return std::vector<TargetPrediction>(targets.size(),
                                         {{150, 400, 120, 30}, std::vector<double>(graph.constraints.size(), 0.0)});
  }
};

}  // namespace

TEST_CASE("oracle-constraint placer: true constraints fix the box at any distance") {
  std::vector<Element> els;
  for (int i = 0; i < 3; ++i) els.push_back(placed("item" + std::to_string(i), "ListItem", 20, 20 + 60 * i, 200, 40));
  const Gui full = gui_of(360, 640, els);
  Gui partial = full;
  partial.elements.pop_back();
  const Element target = full.elements.back();
  const LayoutGraph graph = build_graph(partial, extract_placed(partial));

  const FarModel far;
  const auto model = ModelPlacer(far, {}).place(partial, graph, {target});
  CHECK(model[0].bbox != *target.bbox);
  const auto oracle = OracleConstraintPlacer(far, {}).place(partial, graph, {target});
  CHECK(oracle[0].bbox == *target.bbox);
  CHECK(oracle[0].confidence != Confidence::Low);
}
