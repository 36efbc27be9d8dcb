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

#include <algorithm>
#include <numeric>
#include <random>

#include "layoutgraph/error.hpp"
#include "layoutgraph/extract.hpp"
#include "layoutgraph/model.hpp"
#include "test_support.hpp"

using namespace lg;
using lgtest::placed;

TEST_CASE("gui_from_json parses a single placed button") {
  const Gui g = gui_from_json(
      R"({"canvas":{"w":1440,"h":2560},"elements":[{"id":"b","kind":"Button","bbox":{"x":100,"y":100,"w":200,"h":80}}]})");
  CHECK(g.canvas_w == 1440);
  CHECK(g.canvas_h == 2560);
  REQUIRE(g.elements.size() == 1);
  CHECK(g.placed_count() == 1);
  CHECK(*g.elements[0].bbox == BBox{100, 100, 200, 80});
  CHECK(g.elements[0].aspect_ratio == doctest::Approx(2.5));
}

TEST_CASE("gui_from_json rejects invalid documents") {
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10},"elements":[{"id":"a","kind":"Text","bbox":{"x":0,"y":0,"w":0,"h":5}}]})"),
                  ValidationError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10})"), ParseError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10},"elements":[{"id":"a","kind":"Text","bbox":{"x":0,"y":0,"w":2,"h":5}},{"id":"a","kind":"Text","bbox":{"x":0,"y":0,"w":2,"h":5}}]})"),
                  ValidationError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10},"elements":[{"id":"a","kind":"Spaceship","bbox":{"x":0,"y":0,"w":2,"h":5}}]})"),
                  ValidationError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10},"elements":[{"id":"a","kind":"Text"}]})"),
                  ValidationError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":0,"h":10}})"), ValidationError);
  CHECK_THROWS_AS(gui_from_json(R"({"canvas":{"w":10,"h":10},"elements":[{"id":"a","kind":"Text","bbox":{"x":0.5,"y":0,"w":2,"h":5}}]})"),
                  ValidationError);
}

TEST_CASE("unplaced elements keep their aspect ratio") {
  const Gui g = gui_from_json(
      R"({"canvas":{"w":100,"h":100},"elements":[{"id":"t","kind":"Icon","aspect_ratio":1.5}]})");
  CHECK_FALSE(g.elements[0].placed());
  CHECK(g.elements[0].aspect_ratio == 1.5);
  CHECK(gui_from_json(gui_to_json(g)) == g);
}

TEST_CASE("empty gui emits the canvas only") {
  Gui g;
  g.canvas_w = 1440;
  g.canvas_h = 2560;
  CHECK(gui_to_json(g) == R"({"canvas":{"h":2560,"w":1440}})");
  CHECK(gui_from_json(gui_to_json(g)) == g);
}

namespace {

Gui random_gui(std::mt19937_64& rng) {
  Gui g = lgtest::random_layout(rng, lgtest::uniform_int(rng, 0, 8));
  if (rng() % 2) g.topic = "list";
  for (auto& e : g.elements) {
    switch (rng() % 4) {
      case 0: e.text = "label " + std::to_string(rng() % 5); break;
      case 1: e.appearance = std::vector<double>{0.25, -1.5, 3.0 / 7.0}; break;
      case 2:
        e.bbox.reset();
        e.aspect_ratio = 0.1 + static_cast<double>(rng() % 1000) / 97.0;
        break;
      default: break;
    }
  }
  return g;
}

// Emits an element object with its keys in a random order.
std::string shuffled_element(const Element& e, std::mt19937_64& rng) {
  std::vector<std::string> fields;
  fields.push_back(R"("id":")" + e.id + '"');
  fields.push_back(R"("kind":")" + e.kind + '"');
  if (e.bbox) {
    std::vector<std::string> b = {"\"x\":" + std::to_string(e.bbox->x), "\"y\":" + std::to_string(e.bbox->y),
                                  "\"w\":" + std::to_string(e.bbox->w), "\"h\":" + std::to_string(e.bbox->h)};
    std::shuffle(b.begin(), b.end(), rng);
    fields.push_back("\"bbox\":{" + b[0] + " , " + b[1] + "," + b[2] + ",\n" + b[3] + "}");
  } else {
    fields.push_back("\"aspect_ratio\": 2.5");
  }
  if (e.text) fields.push_back(R"("text":")" + *e.text + '"');
  std::shuffle(fields.begin(), fields.end(), rng);
  std::string s = "{";
  for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? ",  " : "") + fields[i];
  return s + "}";
}

}  // namespace

TEST_CASE("property: gui json round-trip is the identity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Gui g = random_gui(rng);
    const std::string bytes = gui_to_json(g);
    const Gui back = gui_from_json(bytes);
    CHECK(back == g);
    CHECK(gui_to_json(back) == bytes);
  }
}

TEST_CASE("property: equal guis with shuffled keys emit identical bytes") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    Gui g = lgtest::random_layout(rng, lgtest::uniform_int(rng, 1, 6));
    g.elements.back().bbox.reset();
    g.elements.back().aspect_ratio = 2.5;
    std::string a = R"({"elements":[)", b = R"({ "elements" : [)";
    for (std::size_t i = 0; i < g.elements.size(); ++i) {
      a += (i ? "," : "") + shuffled_element(g.elements[i], rng);
      b += (i ? "," : "") + shuffled_element(g.elements[i], rng);
    }
    a += R"(],"canvas":{"w":360,"h":640}})";
    b += R"(], "canvas":{"h":640, "w":360}})";
    CHECK(gui_to_json(gui_from_json(a)) == gui_to_json(gui_from_json(b)));
  }
}

TEST_CASE("build_graph: one left alignment over three elements") {
  const Gui g = lgtest::gui_of(100, 100, {placed("a", "Text", 10, 0, 20, 10), placed("b", "Text", 10, 20, 30, 10),
                                          placed("c", "Text", 10, 40, 25, 10)});
  ConstraintNode c;
  c.id = "left";
  c.align = AlignKind::Left;
  c.line = 10;
  c.members = {"a", "b", "c"};
  const LayoutGraph lgph = build_graph(g, {c});
  REQUIRE(lgph.element_count() == 3);
  REQUIRE(lgph.constraint_count() == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(lgph.adjacent(i, 0));

  c.members = {"b"};
  const LayoutGraph dropped = build_graph(g, {c});
  CHECK(dropped.element_count() == 3);
  CHECK(dropped.constraint_count() == 0);
  CHECK(dropped.adjacency.empty());

  c.members = {"a", "zz"};
  CHECK_THROWS_AS(build_graph(g, {c}), ValidationError);
}

TEST_CASE("build_graph: unplaced elements are not nodes and cannot be referenced") {
  Gui g = lgtest::gui_of(100, 100, {placed("a", "Text", 10, 0, 20, 10), lgtest::unplaced("u", "Icon", 1.0)});
  const LayoutGraph lgph = build_graph(g, {});
  CHECK(lgph.element_count() == 1);
  ConstraintNode c;
  c.id = "x";
  c.kind = ConstraintKind::ElementGroup;
  c.members = {"a", "u"};
  CHECK_THROWS_AS(build_graph(g, {c}), ValidationError);
}

TEST_CASE("property: extracted graphs are bipartite, consistent and reorder invariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Gui g = lgtest::random_layout(rng, lgtest::uniform_int(rng, 2, 12));
    const auto cs = extract_all(g);
    const LayoutGraph lgph = build_graph(g, cs);
    REQUIRE(lgph.constraint_count() == cs.size());
    for (std::size_t j = 0; j < lgph.constraint_count(); ++j) {
      const auto& c = lgph.constraints[j];
      CHECK(lgph.constraint_neighbors[j].size() >= 2);
      for (std::size_t i = 0; i < lgph.element_count(); ++i) {
        const bool member = std::find(c.members.begin(), c.members.end(), lgph.elements[i].id) != c.members.end();
        CHECK(lgph.adjacent(i, j) == member);
        if (member) CHECK(c.satisfied_by(*lgph.elements[i].bbox, 2));
      }
    }
    // Edges only ever join an element row to a constraint column; the
    // neighbor lists are the transpose of each other.
    std::size_t edges_e = 0, edges_c = 0;
    for (const auto& ns : lgph.element_neighbors) edges_e += ns.size();
    for (const auto& ns : lgph.constraint_neighbors) edges_c += ns.size();
    CHECK(edges_e == edges_c);

    std::vector<std::size_t> perm(g.elements.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Gui shuffled = g;
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.elements[i] = g.elements[perm[i]];
    const LayoutGraph other = build_graph(shuffled, extract_all(shuffled));
    REQUIRE(other.constraint_count() == lgph.constraint_count());
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = 0; j < lgph.constraint_count(); ++j) {
        CHECK(other.constraints[j].id == lgph.constraints[j].id);
        CHECK(other.adjacent(i, j) == lgph.adjacent(perm[i], j));
      }
  }
}

TEST_CASE("constraint json round-trip and attrs") {
  ConstraintNode a;
  a.id = "a1";
  a.align = AlignKind::Left;
  a.line = 100;
  a.members = {"x", "y"};
  ConstraintNode s;
  s.id = "s1";
  s.kind = ConstraintKind::SameSize;
  s.size_kind = SizeKind::Width;
  s.size_value = 200;
  s.members = {"x", "y"};
  ConstraintNode gr;
  gr.id = "g1";
  gr.kind = ConstraintKind::MultimodalGroup;
  gr.members = {"x", "y"};
  const std::vector<ConstraintNode> cs{a, s, gr};
  CHECK(constraints_from_json(constraints_to_json(cs)) == cs);
  CHECK(a.attr() == std::vector<double>{1, 0, 0, 0, 0, 0, 100, 0});
  a.align = AlignKind::HMid;
  CHECK(a.attr() == std::vector<double>{0, 0, 0, 0, 0, 1, 0, 100});
  CHECK(s.attr() == std::vector<double>{200, 0});
  CHECK(gr.attr().size() == kGroupSlotDim);
}
