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

#include "layoutgraph/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <utility>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/error.hpp"

namespace lg {

using nlohmann::json;

double pos_error(const BBox& pred, const BBox& truth, int W, int H) {
  const double dx = pred.x - truth.x, dy = pred.y - truth.y;
  const double dist = std::sqrt(dx * dx + dy * dy);
  const double fx = std::max(0, W - pred.w), fy = std::max(0, H - pred.h);
  const double denom = std::sqrt(fx * fx + fy * fy);
  if (denom == 0.0) return dist == 0.0 ? 0.0 : 1.0;
  return std::min(1.0, dist / denom);
}

double area_error(const BBox& pred, const BBox& truth) {
  const double a = static_cast<double>(pred.w) * pred.h, b = static_cast<double>(truth.w) * truth.h;
  const double m = std::max(a, b);
  return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

double align_error(const BBox& pred, const std::vector<ConstraintNode>& truth, int tol) {
  std::size_t total = 0, hit = 0;
  for (const ConstraintNode& c : truth) {
    if (c.kind != ConstraintKind::Alignment) continue;
    ++total;
    if (c.satisfied_by(pred, tol)) ++hit;
  }
  return total ? 1.0 - static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

std::vector<std::size_t> reading_order(const Gui& gui) {
  std::vector<std::size_t> idx(gui.elements.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Element& p = gui.elements[a];
    const Element& q = gui.elements[b];
    return std::tie(p.bbox->y, p.bbox->x, p.id) < std::tie(q.bbox->y, q.bbox->x, q.id);
  });
  return idx;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<PairSample> make_pairs(const Gui& gui, std::uint64_t seed, int chunks, ChunkMode mode,
                                   std::size_t gui_index) {
  const std::size_t n = gui.elements.size();
  if (n < 4) throw ValidationError("pairs: GUI needs at least 4 elements, has " + std::to_string(n));
  if (chunks < 1) throw ValidationError("pairs: chunks must be >= 1");
  if (gui.placed_count() != n) throw ValidationError("pairs: every element must be placed");
  const auto order = reading_order(gui);
  Rng rng(seed);
  std::vector<PairSample> out;
  for (int d = 0; d < chunks; ++d) {
    const std::size_t k = 1 + rng.below(n - 1);
    std::vector<bool> keep(n, false);
    if (mode == ChunkMode::Contiguous) {
      const std::size_t start = rng.below(n - k + 1);
      for (std::size_t i = start; i < start + k; ++i) keep[order[i]] = true;
    } else {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
      for (std::size_t i = 0; i < k; ++i) keep[perm[i]] = true;
    }
    Gui partial = gui;
    partial.elements.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (keep[i]) partial.elements.push_back(gui.elements[i]);
    for (std::size_t i = 0; i < n; ++i) {
      if (keep[i]) continue;
      out.push_back(PairSample{gui_index, static_cast<std::size_t>(d), partial, gui.elements[i]});
    }
  }
  return out;
}

std::vector<PairSample> make_dataset_pairs(const std::vector<Gui>& guis, std::uint64_t seed, int chunks,
                                           ChunkMode mode) {
  std::vector<PairSample> out;
  for (std::size_t i = 0; i < guis.size(); ++i) {
    auto p = make_pairs(guis[i], splitmix(seed ^ splitmix(i)), chunks, mode, i);
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

std::string pairs_to_json(const std::vector<PairSample>& pairs) {
  json arr = json::array();
  for (const PairSample& p : pairs) {
    Gui holder;
    holder.canvas_w = p.partial.canvas_w;
    holder.canvas_h = p.partial.canvas_h;
    holder.elements = {p.target};
    arr.push_back({{"gui", p.gui},
                   {"draw", p.draw},
                   {"partial", json::parse(gui_to_json(p.partial))},
                   {"target", json::parse(gui_to_json(holder))["elements"][0]}});
  }
  return json{{"pairs", arr}}.dump();
}

std::vector<PairSample> pairs_from_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("pairs: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array())
    throw ParseError("pairs: expected {\"pairs\": [...]}");
  std::vector<PairSample> out;
  for (const json& j : doc["pairs"]) {
    if (!j.is_object() || !j.contains("partial") || !j.contains("target") || !j.value("gui", json()).is_number_unsigned() ||
        !j.value("draw", json()).is_number_unsigned())
      throw ParseError("pairs: entry needs gui, draw, partial and target");
    PairSample p;
    p.gui = j["gui"].get<std::size_t>();
    p.draw = j["draw"].get<std::size_t>();
    p.partial = gui_from_json(j["partial"].dump());
    json holder = {{"canvas", j["partial"]["canvas"]}, {"elements", json::array({j["target"]})}};
    p.target = gui_from_json(holder.dump()).elements.at(0);
    if (!p.target.placed()) throw ParseError("pairs: target without a bbox");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::size_t> FoldPlan::fold(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == f) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::complement(int f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] != f) out.push_back(i);
  return out;
}

FoldPlan kfold(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("kfold: k must be >= 2");
  if (static_cast<std::size_t>(k) > n) throw ValidationError("kfold: k exceeds dataset size");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  FoldPlan plan;
  plan.k = k;
  plan.assignments.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) plan.assignments[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return plan;
}

namespace {

Gui with_target(const Gui& partial, const Element& target) {
  Gui full = partial;
  full.elements.push_back(target);
  return full;
}

bool same_family(const ConstraintNode& a, const ConstraintNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ConstraintKind::Alignment) return a.align == b.align;
  if (a.kind == ConstraintKind::SameSize) return a.size_kind == b.size_kind;
  return true;
}

bool contains_all(const std::vector<std::string>& haystack, const std::vector<std::string>& needles) {
  return std::all_of(needles.begin(), needles.end(), [&](const std::string& s) {
    return std::find(haystack.begin(), haystack.end(), s) != haystack.end();
  });
}

}  // namespace

std::vector<double> truth_flags(const Gui& partial, const LayoutGraph& graph, const Element& target,
                                const ExtractionConfig& ext) {
  if (!target.placed()) throw ValidationError("truth flags: target has no box");
  const auto found = extract_placed(with_target(partial, target), ext);
  std::vector<double> flags;
  flags.reserve(graph.constraints.size());
  for (const ConstraintNode& c : graph.constraints) {
    bool hit = false;
    for (const ConstraintNode& d : found) {
      if (!same_family(c, d) || !contains_all(d.members, c.members) || !contains_all(d.members, {target.id})) continue;
      hit = true;
      break;
    }
    flags.push_back(hit ? 1.0 : 0.0);
  }
  return flags;
}

std::vector<ConstraintNode> truth_alignments(const Gui& partial, const Element& target, const ExtractionConfig& ext) {
  std::vector<ConstraintNode> out;
  for (ConstraintNode& c : extract_placed(with_target(partial, target), ext))
    if (c.kind == ConstraintKind::Alignment && contains_all(c.members, {target.id})) out.push_back(std::move(c));
  return out;
}

namespace {

std::vector<const Element*> stripped(const std::vector<Element>& targets, std::vector<Element>& store) {
  store = targets;
  std::vector<const Element*> out;
  for (Element& e : store) {
    e.bbox.reset();
    out.push_back(&e);
  }
  return out;
}

std::vector<Placement> cold(const Gui& partial, const std::vector<Element>& targets) {
  std::vector<Placement> out;
  for (const Element& t : targets) out.push_back({cold_start_suggestion(partial, t).bbox, Confidence::Low});
  return out;
}

}  // namespace

std::vector<Placement> ModelPlacer::place(const Gui& partial, const LayoutGraph& graph,
                                          const std::vector<Element>& targets) const {
  if (graph.element_count() == 0) return cold(partial, targets);
  std::vector<Element> store;
  const auto ptrs = stripped(targets, store);
  const auto preds = model_.predict(graph, ptrs);
  std::vector<Placement> out;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    const RefineResult r = refine(preds[i].raw, preds[i].probs, graph, *ptrs[i], cfg_);
    out.push_back({r.bbox, r.confidence});
  }
  return out;
}

std::vector<Placement> OracleConstraintPlacer::place(const Gui& partial, const LayoutGraph& graph,
                                                     const std::vector<Element>& targets) const {
  if (graph.element_count() == 0) return cold(partial, targets);
  std::vector<Element> store;
  const auto ptrs = stripped(targets, store);
  const auto preds = model_.predict(graph, ptrs);
  RefineConfig cfg;
  cfg.sigma = static_cast<double>(partial.canvas_w) + partial.canvas_h;
  std::vector<Placement> out;
  for (std::size_t i = 0; i < ptrs.size(); ++i) {
    const auto flags = truth_flags(partial, graph, targets[i], ext_);
    const RefineResult r = refine(preds[i].raw, flags, graph, *ptrs[i], cfg);
    out.push_back({r.bbox, r.confidence});
  }
  return out;
}

std::vector<Placement> OraclePlacer::place(const Gui&, const LayoutGraph&, const std::vector<Element>& targets) const {
  std::vector<Placement> out;
  for (const Element& t : targets) out.push_back({*t.bbox, Confidence::High});
  return out;
}

std::vector<Placement> CenterPlacer::place(const Gui& partial, const LayoutGraph&,
                                           const std::vector<Element>& targets) const {
  return cold(partial, targets);
}

void MetricSums::add(double p, double a, double al) {
  ++count;
  pos += p;
  area += a;
  align += al;
}

namespace {

json sums_json(const MetricSums& s) {
  return {{"count", s.count}, {"pos_error", s.pos_mean()}, {"area_error", s.area_mean()}, {"align_error", s.align_mean()}};
}

}  // namespace

json to_json(const MetricReport& r) {
  json j;
  j["overall"] = sums_json(r.overall);
  j["buckets"] = json::array();
  for (const auto& [placed, s] : r.buckets) {
    json b = sums_json(s);
    b["placed"] = placed;
    j["buckets"].push_back(b);
  }
  j["by_confidence"] = json::object();
  for (const auto& [c, s] : r.by_confidence) j["by_confidence"][std::string(to_string(c))] = sums_json(s);
  j["mean_step_seconds"] = r.mean_step_seconds;
  return j;
}

MetricReport evaluate(const Placer& placer, const std::vector<PairSample>& pairs, const ExtractionConfig& ext) {
  // Consecutive runs with the same (gui, draw) share one partial.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i + 1;
    while (j < pairs.size() && pairs[j].gui == pairs[i].gui && pairs[j].draw == pairs[i].draw) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  struct Row {
    double pos, area, align, seconds;
    Confidence conf;
  };
  std::vector<Row> rows(pairs.size());
  const long n_runs = static_cast<long>(runs.size());
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < n_runs; ++r) {
    const auto [b, e] = runs[static_cast<std::size_t>(r)];
    const Gui& partial = pairs[b].partial;
    std::vector<Element> targets;
    for (std::size_t i = b; i < e; ++i) targets.push_back(pairs[i].target);
    const auto t0 = std::chrono::steady_clock::now();
    const LayoutGraph graph = partial_graph(partial, ext);
    const auto placed = placer.place(partial, graph, targets);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t i = b; i < e; ++i) {
      const BBox& truth = *pairs[i].target.bbox;
      const BBox& pred = placed[i - b].bbox;
      rows[i] = {pos_error(pred, truth, partial.canvas_w, partial.canvas_h), area_error(pred, truth),
                 align_error(pred, truth_alignments(partial, pairs[i].target, ext), ext.tol),
                 secs / static_cast<double>(e - b), placed[i - b].confidence};
    }
  }
  MetricReport rep;
  double secs = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Row& row = rows[i];
    rep.overall.add(row.pos, row.area, row.align);
    rep.buckets[pairs[i].partial.placed_count()].add(row.pos, row.area, row.align);
    rep.by_confidence[row.conf].add(row.pos, row.area, row.align);
    secs += row.seconds;
  }
  rep.mean_step_seconds = pairs.empty() ? 0.0 : secs / static_cast<double>(pairs.size());
  return rep;
}

}  // namespace lg
