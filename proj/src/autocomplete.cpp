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

#include "layoutgraph/autocomplete.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "layoutgraph/error.hpp"

namespace lg {

namespace {

int iround(double v) {
  if (!std::isfinite(v)) v = 0.0;
  return static_cast<int>(std::lround(std::clamp(v, -1e9, 1e9)));
}

struct Step {
  std::string text;
  int distance = 0;
};

std::string step_text(const char* what, int from, int to, const std::string& id, int d) {
  return std::string(what) + " " + std::to_string(from) + " -> " + std::to_string(to) + " via " + id +
         " (distance " + std::to_string(d) + ")";
}

// A size candidate: the new (w, h) and the distance that triggered it.
struct SizeSnap {
  int w = 0, h = 0, d = 0;
  bool width = true;
  std::size_t c = 0;
  int from = 0, to = 0;
};

struct AxisSnap {
  int v = 0, d = 0;
  std::size_t c = 0;
};

struct Ctx {
  const LayoutGraph& g;
  const std::vector<double>& probs;
  const Element& target;
  const RefineConfig& cfg;
  double r;
  int W, H;

  bool on(std::size_t j) const { return probs[j] >= cfg.prob_threshold; }
  const std::string& id(std::size_t j) const { return g.constraints[j].id; }
};

// Prefers smaller distance, then the driving dimension, then the smaller id.
bool better_size(const Ctx& cx, const SizeSnap& a, const std::optional<SizeSnap>& best) {
  if (!best) return true;
  if (a.d != best->d) return a.d < best->d;
  const bool driving_w = cx.r >= 1.0;
  if (a.width != best->width) return a.width == driving_w;
  return cx.id(a.c) < cx.id(best->c);
}

std::optional<SizeSnap> size_candidate(const Ctx& cx, const BBox& b, bool width, int value, std::size_t j) {
  SizeSnap s;
  s.width = width;
  s.c = j;
  if (width) {
    s.w = value;
    s.h = std::max(1, iround(value / cx.r));
    s.d = std::abs(b.w - value);
    s.from = b.w;
  } else {
    s.h = value;
    s.w = std::max(1, iround(value * cx.r));
    s.d = std::abs(b.h - value);
    s.from = b.h;
  }
  s.to = value;
  if (value < 1 || s.w > cx.W || s.h > cx.H || s.d > cx.cfg.sigma) return std::nullopt;
  return s;
}

std::optional<SizeSnap> same_size_snap(const Ctx& cx, const BBox& b) {
  std::optional<SizeSnap> best;
  for (std::size_t j = 0; j < cx.g.constraints.size(); ++j) {
    const ConstraintNode& c = cx.g.constraints[j];
    if (c.kind != ConstraintKind::SameSize || !cx.on(j)) continue;
    auto s = size_candidate(cx, b, c.size_kind == SizeKind::Width, c.size_value, j);
    if (s && better_size(cx, *s, best)) best = s;
  }
  return best;
}

void apply_size(const Ctx& cx, BBox& b, const SizeSnap& s) {
  b.w = s.w;
  b.h = s.h;
  b.x = std::clamp(b.x, 0, cx.W - b.w);
  b.y = std::clamp(b.y, 0, cx.H - b.h);
}

void take_axis(const Ctx& cx, std::optional<AxisSnap>& best, AxisSnap a) {
  if (a.d > cx.cfg.sigma) return;
  if (!best || a.d < best->d || (a.d == best->d && cx.id(a.c) < cx.id(best->c))) best = a;
}

std::optional<AxisSnap> align_snap(const Ctx& cx, const BBox& b, bool x_axis) {
  std::optional<AxisSnap> best;
  for (std::size_t j = 0; j < cx.g.constraints.size(); ++j) {
    const ConstraintNode& c = cx.g.constraints[j];
    if (c.kind != ConstraintKind::Alignment || !cx.on(j) || is_vertical_line(c.align) != x_axis) continue;
    const int extent = x_axis ? b.w : b.h;
    const int limit = x_axis ? cx.W : cx.H;
    const int cur = x_axis ? b.x : b.y;
    int v = c.line;
    if (c.align == AlignKind::Right || c.align == AlignKind::Bottom) v = c.line - extent;
    if (c.align == AlignKind::VMid || c.align == AlignKind::HMid) v = c.line - extent / 2;
    if (v < 0 || v > limit - extent) continue;
    take_axis(cx, best, AxisSnap{v, std::abs(cur - v), j});
  }
  return best;
}

// Group members of the target's kind, as boxes.
std::vector<BBox> kind_members(const Ctx& cx, std::size_t j) {
  std::vector<BBox> out;
  for (std::size_t e : cx.g.constraint_neighbors[j]) {
    const Element& el = cx.g.elements[e];
    if (el.kind == cx.target.kind && el.bbox) out.push_back(*el.bbox);
  }
  return out;
}

double mean_of(const std::vector<BBox>& m, int BBox::*field) {
  double s = 0.0;
  for (const BBox& b : m) s += b.*field;
  return s / static_cast<double>(m.size());
}

int median_round(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2) return v[n / 2];
  return iround((static_cast<double>(v[n / 2 - 1]) + v[n / 2]) / 2.0);
}

std::optional<SizeSnap> group_size_snap(const Ctx& cx, const BBox& b) {
  std::optional<SizeSnap> best;
  for (std::size_t j = 0; j < cx.g.constraints.size(); ++j) {
    if (!cx.g.constraints[j].is_group() || !cx.on(j)) continue;
    const auto m = kind_members(cx, j);
    if (m.size() < 2) continue;
    for (bool width : {true, false}) {
      const int avg = iround(mean_of(m, width ? &BBox::w : &BBox::h));
      auto s = size_candidate(cx, b, width, avg, j);
      if (s && better_size(cx, *s, best)) best = s;
    }
  }
  return best;
}

enum class Run { None, Vertical, Horizontal };

Run run_of(const std::vector<BBox>& m) {
  int x0 = m[0].x, x1 = m[0].x, y0 = m[0].y, y1 = m[0].y;
  for (const BBox& b : m) {
    x0 = std::min(x0, b.x);
    x1 = std::max(x1, b.x);
    y0 = std::min(y0, b.y);
    y1 = std::max(y1, b.y);
  }
  if (y1 - y0 > x1 - x0) return Run::Vertical;
  if (x1 - x0 > y1 - y0) return Run::Horizontal;
  return Run::None;
}

// Mean gap between successive members along the run.
double run_gap(std::vector<BBox> m, bool vertical) {
  std::sort(m.begin(), m.end(), [&](const BBox& a, const BBox& b) {
    return vertical ? std::tie(a.y, a.x) < std::tie(b.y, b.x) : std::tie(a.x, a.y) < std::tie(b.x, b.y);
  });
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < m.size(); ++i)
    s += vertical ? m[i + 1].y - m[i].bottom() : m[i + 1].x - m[i].right();
  return s / static_cast<double>(m.size() - 1);
}

// Continuation of the group's run: positions on both axes for box b.
struct RunPos {
  int x = 0, y = 0;
};

std::optional<RunPos> run_position(const std::vector<BBox>& m, const BBox& b) {
  const Run run = run_of(m);
  if (run == Run::None) return std::nullopt;
  const bool vertical = run == Run::Vertical;
  const double gap = run_gap(m, vertical);
  int lo = vertical ? m[0].y : m[0].x, hi = vertical ? m[0].bottom() : m[0].right();
  std::vector<int> cross;
  for (const BBox& e : m) {
    lo = std::min(lo, vertical ? e.y : e.x);
    hi = std::max(hi, vertical ? e.bottom() : e.right());
    cross.push_back(vertical ? e.x : e.y);
  }
  const int extent = vertical ? b.h : b.w;
  const int cur = vertical ? b.y : b.x;
  const int after = iround(hi + gap);
  const int before = iround(lo - gap - extent);
  const int main = std::abs(after - cur) <= std::abs(before - cur) ? after : before;
  const int other = median_round(cross);
  return vertical ? RunPos{other, main} : RunPos{main, other};
}

struct Attempt {
  BBox box;
  std::vector<std::size_t> used;
  std::vector<Step> steps;
};

void record_size(const Ctx& cx, Attempt& a, const SizeSnap& s) {
  a.steps.push_back({step_text(s.width ? "width" : "height", s.from, s.to, cx.id(s.c), s.d), s.d});
  apply_size(cx, a.box, s);
  a.used.push_back(s.c);
}

void record_axis(const Ctx& cx, Attempt& a, const AxisSnap& s, bool x_axis) {
  int& v = x_axis ? a.box.x : a.box.y;
  a.steps.push_back({step_text(x_axis ? "x" : "y", v, s.v, cx.id(s.c), s.d), s.d});
  v = s.v;
  if (std::find(a.used.begin(), a.used.end(), s.c) == a.used.end()) a.used.push_back(s.c);
}

std::optional<Attempt> high_attempt(const Ctx& cx, const BBox& base) {
  Attempt a{base, {}, {}};
  auto s = same_size_snap(cx, a.box);
  if (!s) return std::nullopt;
  record_size(cx, a, *s);
  for (bool x_axis : {true, false}) {
    auto p = align_snap(cx, a.box, x_axis);
    if (!p) return std::nullopt;
    record_axis(cx, a, *p, x_axis);
  }
  return a;
}

// Whatever size and alignment snaps are individually in reach.
Attempt low_attempt(const Ctx& cx, const BBox& base) {
  Attempt a{base, {}, {}};
  if (auto s = same_size_snap(cx, a.box)) record_size(cx, a, *s);
  for (bool x_axis : {true, false})
    if (auto p = align_snap(cx, a.box, x_axis)) record_axis(cx, a, *p, x_axis);
  return a;
}

std::optional<Attempt> medium_attempt(const Ctx& cx, const BBox& base) {
  Attempt a{base, {}, {}};
  bool grouped = false;
  auto s = same_size_snap(cx, a.box);
  if (!s) {
    s = group_size_snap(cx, a.box);
    grouped = s.has_value();
  }
  if (!s) return std::nullopt;
  record_size(cx, a, *s);
  for (bool x_axis : {true, false}) {
    auto p = align_snap(cx, a.box, x_axis);
    if (!p) {
      const int extent = x_axis ? a.box.w : a.box.h;
      const int limit = x_axis ? cx.W : cx.H;
      const int cur = x_axis ? a.box.x : a.box.y;
      for (std::size_t j = 0; j < cx.g.constraints.size(); ++j) {
        if (!cx.g.constraints[j].is_group() || !cx.on(j)) continue;
        const auto m = kind_members(cx, j);
        if (m.size() < 2) continue;
        auto rp = run_position(m, a.box);
        if (!rp) continue;
        const int v = x_axis ? rp->x : rp->y;
        if (v < 0 || v > limit - extent) continue;
        take_axis(cx, p, AxisSnap{v, std::abs(cur - v), j});
      }
      if (!p) return std::nullopt;
      grouped = true;
    }
    record_axis(cx, a, *p, x_axis);
  }
  if (!grouped) return std::nullopt;
  return a;
}

struct Pass {
  RefineResult result;
  std::vector<Step> steps;
};

Pass refine_pass(const Box4& raw, const std::vector<double>& probs, const LayoutGraph& graph,
                 const Element& target, const RefineConfig& cfg) {
  cfg.validate();
  if (probs.size() != graph.constraints.size())
    throw ShapeError("refine: " + std::to_string(probs.size()) + " probabilities for " +
                     std::to_string(graph.constraints.size()) + " constraints");
  const BBox base = base_box(raw, target.aspect_ratio, graph.canvas_w, graph.canvas_h);
  const Ctx cx{graph, probs, target, cfg, target.aspect_ratio, graph.canvas_w, graph.canvas_h};
  Pass out;
  out.result.bbox = base;
  Confidence conf = Confidence::High;
  auto a = high_attempt(cx, base);
  if (!a) {
    conf = Confidence::Medium;
    a = medium_attempt(cx, base);
  }
  if (!a) {
    conf = Confidence::Low;
    a = low_attempt(cx, base);
  }
  out.result.bbox = a->box;
  out.result.confidence = conf;
  for (std::size_t j : a->used) out.result.satisfied.push_back(cx.id(j));
  out.steps = std::move(a->steps);
  for (const Step& s : out.steps) out.result.trace.push_back(s.text);
  return out;
}

Box4 as_raw(const BBox& b) { return {double(b.x), double(b.y), double(b.w), double(b.h)}; }

}  // namespace

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::High: return "high";
    case Confidence::Medium: return "medium";
    case Confidence::Low: return "low";
  }
  return "low";
}

Confidence confidence_from_string(std::string_view s) {
  if (s == "high") return Confidence::High;
  if (s == "medium") return Confidence::Medium;
  if (s == "low") return Confidence::Low;
  throw ParseError("unknown confidence '" + std::string(s) + "'");
}

void RefineConfig::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("refine: sigma must be >= 0");
  if (!(prob_threshold > 0.0 && prob_threshold < 1.0))
    throw ValidationError("refine: prob_threshold must be in (0, 1)");
}

BBox base_box(const Box4& raw, double r, int W, int H) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("refine: aspect ratio must be positive");
  if (W < 1 || H < 1) throw ValidationError("refine: empty canvas");
  int w, h;
  if (r >= 1.0) {
    w = std::clamp(iround(raw[2]), 1, W);
    h = std::max(1, iround(w / r));
  } else {
    h = std::clamp(iround(raw[3]), 1, H);
    w = std::max(1, iround(h * r));
  }
  if (h > H) {
    h = H;
    w = std::clamp(iround(h * r), 1, W);
  }
  if (w > W) {
    w = W;
    h = std::clamp(iround(w / r), 1, H);
  }
  return BBox{std::clamp(iround(raw[0]), 0, W - w), std::clamp(iround(raw[1]), 0, H - h), w, h};
}

RefineResult refine_once(const Box4& raw, const std::vector<double>& probs, const LayoutGraph& graph,
                         const Element& target, const RefineConfig& cfg) {
  RefineResult r = refine_pass(raw, probs, graph, target, cfg).result;
  r.passes = 1;
  return r;
}

RefineResult refine(const Box4& raw, const std::vector<double>& probs, const LayoutGraph& graph,
                    const Element& target, const RefineConfig& cfg) {
  Pass p = refine_pass(raw, probs, graph, target, cfg);
  RefineResult out = p.result;
  out.passes = 1;
  while (out.passes < kRefinePasses) {
    Pass next = refine_pass(as_raw(out.bbox), probs, graph, target, cfg);
    ++out.passes;
    for (const Step& s : next.steps)
      if (s.distance > 0) out.trace.push_back(s.text);
    const bool fixed = next.result.bbox == out.bbox;
    out.bbox = next.result.bbox;
    out.confidence = next.result.confidence;
    out.satisfied = std::move(next.result.satisfied);
    if (fixed) break;
  }
  return out;
}

double TargetPrediction::mean_prob() const {
  if (probs.empty()) return 0.0;
  return std::accumulate(probs.begin(), probs.end(), 0.0) / static_cast<double>(probs.size());
}

std::vector<TargetPrediction> NetTargetModel::predict(const LayoutGraph& graph,
                                                      const std::vector<const Element*>& targets) const {
  Tape tape;
  const auto enc = net_.encode(tape, graph);
  std::vector<TargetPrediction> out;
  out.reserve(targets.size());
  for (const Element* t : targets) {
    const Var h_t = net_.encode_target(tape, *t);
    const Tensor place = net_.placement(tape, h_t, enc.h_g).value();
    const Tensor probs = net_.constraint_probs(tape, h_t, enc).value();
    TargetPrediction p;
    p.raw = {place[0] * graph.canvas_w, place[1] * graph.canvas_h, place[2] * graph.canvas_w,
             place[3] * graph.canvas_h};
    p.probs.assign(probs.data().begin(), probs.data().end());
    out.push_back(std::move(p));
  }
  return out;
}

nlohmann::json to_json(const Suggestion& s) {
  nlohmann::json j;
  j["element_id"] = s.element_id;
  j["bbox"] = {{"x", s.bbox.x}, {"y", s.bbox.y}, {"w", s.bbox.w}, {"h", s.bbox.h}};
  j["confidence"] = std::string(to_string(s.confidence));
  j["constraints"] = nlohmann::json::array();
  for (const auto& [id, p] : s.constraints) j["constraints"].push_back({{"id", id}, {"p", p}});
  j["trace"] = s.trace;
  j["raw"] = {{"x", s.raw[0]}, {"y", s.raw[1]}, {"w", s.raw[2]}, {"h", s.raw[3]}};
  if (s.cold_start) j["cold_start"] = true;
  return j;
}

LayoutGraph partial_graph(const Gui& gui, const ExtractionConfig& ext) {
  return build_graph(gui, extract_placed(gui, ext));
}

Suggestion cold_start_suggestion(const Gui& gui, const Element& target) {
  const double area = 0.1 * gui.canvas_w * gui.canvas_h;
  const double w = std::sqrt(area * target.aspect_ratio);
  const double h = w / target.aspect_ratio;
  Suggestion s;
  s.element_id = target.id;
  s.raw = {(gui.canvas_w - w) / 2.0, (gui.canvas_h - h) / 2.0, w, h};
  s.bbox = base_box(s.raw, target.aspect_ratio, gui.canvas_w, gui.canvas_h);
  s.cold_start = true;
  return s;
}

namespace {

std::vector<const Element*> unplaced_of(const Gui& gui) {
  std::vector<const Element*> out;
  for (const Element& e : gui.elements)
    if (!e.placed()) out.push_back(&e);
  return out;
}

Suggestion make_suggestion(const Element& t, const TargetPrediction& p, const LayoutGraph& g,
                           const RefineConfig& cfg) {
  RefineResult r = refine(p.raw, p.probs, g, t, cfg);
  Suggestion s;
  s.element_id = t.id;
  s.bbox = r.bbox;
  s.confidence = r.confidence;
  s.trace = std::move(r.trace);
  s.raw = p.raw;
  s.mean_prob = p.mean_prob();
  for (const std::string& id : r.satisfied) {
    for (std::size_t j = 0; j < g.constraints.size(); ++j)
      if (g.constraints[j].id == id) s.constraints.emplace_back(id, p.probs[j]);
  }
  return s;
}

bool ranks_before(const Suggestion& a, const Suggestion& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.mean_prob != b.mean_prob) return a.mean_prob > b.mean_prob;
  return a.element_id < b.element_id;
}

}  // namespace

std::vector<Suggestion> suggest_each(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                     const ExtractionConfig& ext) {
  cfg.validate();
  const auto targets = unplaced_of(gui);
  std::vector<Suggestion> out;
  if (targets.empty()) return out;
  if (gui.placed_count() == 0) {
    for (const Element* t : targets) out.push_back(cold_start_suggestion(gui, *t));
    return out;
  }
  const LayoutGraph g = partial_graph(gui, ext);
  const auto preds = model.predict(g, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) out.push_back(make_suggestion(*targets[i], preds[i], g, cfg));
  return out;
}

Suggestion suggest_for(const Gui& gui, const std::string& element_id, const TargetModel& model,
                       const RefineConfig& cfg, const ExtractionConfig& ext) {
  cfg.validate();
  const Element* t = gui.find(element_id);
  if (!t) throw NotFoundError("no element '" + element_id + "'");
  if (t->placed()) throw ValidationError("element '" + element_id + "' is already placed");
  if (gui.placed_count() == 0) return cold_start_suggestion(gui, *t);
  const LayoutGraph g = partial_graph(gui, ext);
  return make_suggestion(*t, model.predict(g, {t}).front(), g, cfg);
}

Suggestion suggest_one(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                       const ExtractionConfig& ext) {
  auto all = suggest_each(gui, model, cfg, ext);
  if (all.empty()) throw ValidationError("suggest: no unplaced element");
  return *std::min_element(all.begin(), all.end(), ranks_before);
}

namespace {

struct GroupPick {
  std::size_t c = 0;
  std::string kind;
  std::vector<std::size_t> pool;  // indices into targets
  double mean_p = 0.0;
};

}  // namespace

std::vector<Suggestion> suggest_group(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                      const ExtractionConfig& ext) {
  cfg.validate();
  const auto targets = unplaced_of(gui);
  if (targets.empty()) throw ValidationError("suggest: no unplaced element");
  if (gui.placed_count() == 0) return {suggest_one(gui, model, cfg, ext)};
  const LayoutGraph g = partial_graph(gui, ext);
  const auto preds = model.predict(g, targets);

  std::optional<GroupPick> best;
  for (std::size_t j = 0; j < g.constraints.size(); ++j) {
    if (!g.constraints[j].is_group()) continue;
    std::map<std::string, GroupPick> by_kind;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (preds[i].probs[j] < cfg.prob_threshold) continue;
      GroupPick& gp = by_kind[targets[i]->kind];
      gp.c = j;
      gp.kind = targets[i]->kind;
      gp.pool.push_back(i);
      gp.mean_p += preds[i].probs[j];
    }
    for (auto& [kind, gp] : by_kind) {
      if (gp.pool.size() < 2) continue;
      std::vector<BBox> m;
      for (std::size_t e : g.constraint_neighbors[j])
        if (g.elements[e].kind == kind) m.push_back(*g.elements[e].bbox);
      if (m.size() < 2 || run_of(m) == Run::None) continue;
      gp.mean_p /= static_cast<double>(gp.pool.size());
      const auto key = [&](const GroupPick& p) {
        return std::make_tuple(-static_cast<long>(p.pool.size()), -p.mean_p, g.constraints[p.c].id, p.kind);
      };
      if (!best || key(gp) < key(*best)) best = gp;
    }
  }
  if (!best) return {suggest_one(gui, model, cfg, ext)};

  const ConstraintNode& gc = g.constraints[best->c];
  std::vector<BBox> m;
  for (std::size_t e : g.constraint_neighbors[best->c])
    if (g.elements[e].kind == best->kind) m.push_back(*g.elements[e].bbox);
  const bool vertical = run_of(m) == Run::Vertical;
  const int gap = iround(run_gap(m, vertical));
  int lo = INT32_MAX, hi = INT32_MIN;
  std::vector<int> cross;
  for (const BBox& b : m) {
    lo = std::min(lo, vertical ? b.y : b.x);
    hi = std::max(hi, vertical ? b.bottom() : b.right());
    cross.push_back(vertical ? b.x : b.y);
  }
  const int other = median_round(cross);
  const int shared = iround(mean_of(m, vertical ? &BBox::w : &BBox::h));
  const int W = g.canvas_w, H = g.canvas_h;

  auto main_raw = [&](std::size_t i) { return vertical ? preds[i].raw[1] : preds[i].raw[0]; };
  double mean_main = 0.0;
  for (std::size_t i : best->pool) mean_main += main_raw(i);
  mean_main /= static_cast<double>(best->pool.size());
  const bool after = mean_main >= (lo + hi) / 2.0;

  std::vector<std::size_t> order = best->pool;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (main_raw(a) != main_raw(b)) return after ? main_raw(a) < main_raw(b) : main_raw(a) > main_raw(b);
    return targets[a]->id < targets[b]->id;
  });

  std::vector<Suggestion> out;
  int edge = after ? hi : lo;
  for (std::size_t i : order) {
    const Element& t = *targets[i];
    const double r = t.aspect_ratio;
    BBox b;
    if (vertical) {
      b.w = shared;
      b.h = std::max(1, iround(shared / r));
      b.x = other;
      b.y = after ? edge + gap : edge - gap - b.h;
      edge = after ? b.bottom() : b.y;
    } else {
      b.h = shared;
      b.w = std::max(1, iround(shared * r));
      b.y = other;
      b.x = after ? edge + gap : edge - gap - b.w;
      edge = after ? b.right() : b.x;
    }
    Suggestion s;
    s.element_id = t.id;
    s.raw = preds[i].raw;
    s.mean_prob = preds[i].mean_prob();
    s.constraints.emplace_back(gc.id, preds[i].probs[best->c]);
    const BBox rb = base_box(s.raw, r, W, H);
    auto note = [&](const char* what, int from, int to) {
      s.trace.push_back(step_text(what, from, to, gc.id, std::abs(to - from)));
    };
    if (vertical) note("width", rb.w, b.w);
    else note("height", rb.h, b.h);
    note("x", rb.x, b.x);
    note("y", rb.y, b.y);
    if (inside_canvas(b, W, H)) {
      s.bbox = b;
      s.confidence = Confidence::Medium;
    } else {
      s.bbox = base_box(as_raw(b), r, W, H);
      s.confidence = Confidence::Low;
      s.constraints.clear();
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Suggestion> suggest_all(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                    const ExtractionConfig& ext) {
  std::vector<Suggestion> out;
  Gui cur = gui;
  while (cur.placed_count() < cur.elements.size()) {
    Suggestion s = suggest_one(cur, model, cfg, ext);
    cur = accept(cur, s.element_id, s.bbox);
    out.push_back(std::move(s));
  }
  return out;
}

bool inside_canvas(const BBox& b, int W, int H) {
  return b.w >= 1 && b.h >= 1 && b.x >= 0 && b.y >= 0 && b.right() <= W && b.bottom() <= H;
}

Gui accept(const Gui& gui, const std::string& element_id, const BBox& bbox) {
  Gui out = gui;
  auto it = std::find_if(out.elements.begin(), out.elements.end(),
                         [&](const Element& e) { return e.id == element_id; });
  if (it == out.elements.end()) throw NotFoundError("no element '" + element_id + "'");
  if (it->placed()) throw ValidationError("element '" + element_id + "' is already placed");
  if (!inside_canvas(bbox, out.canvas_w, out.canvas_h))
    throw ValidationError("bbox of '" + element_id + "' is outside the canvas");
  it->bbox = bbox;
  if (!ratio_matches(bbox, it->aspect_ratio)) it->aspect_ratio = static_cast<double>(bbox.w) / bbox.h;
  return out;
}

}  // namespace lg
