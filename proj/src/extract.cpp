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

#include "layoutgraph/extract.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>

#include "layoutgraph/error.hpp"

namespace lg {

void ExtractionConfig::validate() const {
  if (tol < 0) throw ValidationError("extraction: tol must be >= 0");
  if (group_gap < 0) throw ValidationError("extraction: group_gap must be >= 0");
  if (min_members < 2) throw ValidationError("extraction: min_members must be >= 2");
}

namespace {

struct Placed {
  const Element* e;
  const BBox& box() const { return *e->bbox; }
};

std::vector<Placed> placed_elements(const Gui& gui, bool require_all) {
  std::vector<Placed> out;
  for (const auto& e : gui.elements) {
    if (e.placed()) {
      out.push_back({&e});
    } else if (require_all) {
      throw ValidationError("extraction requires placed elements; '" + e.id + "' is unplaced");
    }
  }
  // Reading order; makes everything below independent of list order.
  std::sort(out.begin(), out.end(), [](const Placed& a, const Placed& b) {
    return std::tie(a.box().y, a.box().x, a.e->id) < std::tie(b.box().y, b.box().x, b.e->id);
  });
  return out;
}

int rounded_median(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return static_cast<int>(std::floor((static_cast<double>(v[n / 2 - 1]) + v[n / 2]) / 2.0 + 0.5));
}

struct Cluster {
  int value;
  std::vector<const Placed*> members;
};

// Single-linkage clustering of one integer key, then median and tol filter.
template <typename Key>
std::vector<Cluster> cluster_by(const std::vector<Placed>& items, Key key, const ExtractionConfig& cfg) {
  std::vector<const Placed*> order;
  for (const auto& p : items) order.push_back(&p);
  std::sort(order.begin(), order.end(), [&](const Placed* a, const Placed* b) {
    return std::make_pair(key(*a), a->e->id) < std::make_pair(key(*b), b->e->id);
  });
  std::vector<Cluster> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i < order.size() && key(*order[i]) - key(*order[i - 1]) <= cfg.tol) continue;
    std::vector<int> values;
    for (std::size_t k = start; k < i; ++k) values.push_back(key(*order[k]));
    if (values.size() >= static_cast<std::size_t>(cfg.min_members)) {
      Cluster c{rounded_median(values), {}};
      for (std::size_t k = start; k < i; ++k)
        if (std::abs(key(*order[k]) - c.value) <= cfg.tol) c.members.push_back(order[k]);
      if (c.members.size() >= static_cast<std::size_t>(cfg.min_members)) out.push_back(std::move(c));
    }
    start = i;
  }
  return out;
}

std::vector<std::string> member_ids(const std::vector<const Placed*>& members) {
  std::vector<std::string> ids;
  for (const auto* p : members) ids.push_back(p->e->id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void finish(std::vector<ConstraintNode>& out) {
  for (auto& c : out) c.id = canonical_constraint_id(c);
  std::sort(out.begin(), out.end(),
            [](const ConstraintNode& a, const ConstraintNode& b) { return a.id < b.id; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ConstraintNode& a, const ConstraintNode& b) { return a.id == b.id; }),
            out.end());
}

std::vector<ConstraintNode> alignments_of(const std::vector<Placed>& items, const ExtractionConfig& cfg) {
  std::vector<ConstraintNode> out;
  for (AlignKind kind : kAllAlignKinds) {
    for (auto& cl : cluster_by(items, [kind](const Placed& p) { return align_coord(p.box(), kind); }, cfg)) {
      ConstraintNode c;
      c.kind = ConstraintKind::Alignment;
      c.align = kind;
      c.line = cl.value;
      c.members = member_ids(cl.members);
      out.push_back(std::move(c));
    }
  }
  finish(out);
  return out;
}

std::vector<ConstraintNode> sizes_of(const std::vector<Placed>& items, const ExtractionConfig& cfg) {
  std::vector<ConstraintNode> out;
  for (SizeKind kind : {SizeKind::Width, SizeKind::Height}) {
    for (auto& cl : cluster_by(items, [kind](const Placed& p) { return size_of(p.box(), kind); }, cfg)) {
      ConstraintNode c;
      c.kind = ConstraintKind::SameSize;
      c.size_kind = kind;
      c.size_value = cl.value;
      c.members = member_ids(cl.members);
      out.push_back(std::move(c));
    }
  }
  finish(out);
  return out;
}

// Maximal runs along one axis inside one cross-axis cluster.
void runs_in(std::vector<const Placed*> line, bool vertical, const ExtractionConfig& cfg,
             std::vector<ConstraintNode>& out) {
  auto start_of = [vertical](const Placed* p) { return vertical ? p->box().y : p->box().x; };
  auto end_of = [vertical](const Placed* p) { return vertical ? p->box().bottom() : p->box().right(); };
  std::sort(line.begin(), line.end(), [&](const Placed* a, const Placed* b) {
    return std::make_pair(start_of(a), a->e->id) < std::make_pair(start_of(b), b->e->id);
  });
  const std::size_t n = line.size();
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i;
    int lo = 0, hi = 0;
    while (j + 1 < n) {
      const int gap = start_of(line[j + 1]) - end_of(line[j]);
      if (gap < 0 || gap > cfg.group_gap) break;
      const int nlo = (j == i) ? gap : std::min(lo, gap);
      const int nhi = (j == i) ? gap : std::max(hi, gap);
      if (nhi - nlo > cfg.tol) break;
      lo = nlo;
      hi = nhi;
      ++j;
    }
    // [i, j] is maximal unless the run starting at i-1 already reaches j.
    const bool maximal = (i == 0) || prev_end < j;
    prev_end = j;
    if (maximal && j - i + 1 >= static_cast<std::size_t>(cfg.min_members)) {
      ConstraintNode c;
      c.kind = ConstraintKind::ElementGroup;
      c.members = member_ids({line.begin() + static_cast<std::ptrdiff_t>(i),
                              line.begin() + static_cast<std::ptrdiff_t>(j + 1)});
      out.push_back(std::move(c));
    }
  }
}

// Single-linkage clusters without median filtering.
template <typename Key>
std::vector<std::vector<const Placed*>> link_clusters(const std::vector<const Placed*>& items, Key key,
                                                      int tol) {
  std::vector<const Placed*> order = items;
  std::sort(order.begin(), order.end(), [&](const Placed* a, const Placed* b) {
    return std::make_pair(key(a), a->e->id) < std::make_pair(key(b), b->e->id);
  });
  std::vector<std::vector<const Placed*>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || key(order[i]) - key(order[i - 1]) > tol) out.emplace_back();
    out.back().push_back(order[i]);
  }
  return out;
}

std::vector<ConstraintNode> groups_of(const std::vector<Placed>& items, const ExtractionConfig& cfg) {
  std::map<std::string, std::vector<const Placed*>> by_kind;
  for (const auto& p : items) by_kind[p.e->kind].push_back(&p);
  std::vector<ConstraintNode> out;
  for (const auto& [kind, members] : by_kind) {
    for (auto& col : link_clusters(members, [](const Placed* p) { return p->box().x; }, cfg.tol))
      runs_in(col, /*vertical=*/true, cfg, out);
    for (auto& row : link_clusters(members, [](const Placed* p) { return p->box().y; }, cfg.tol))
      runs_in(row, /*vertical=*/false, cfg, out);
  }
  finish(out);
  return out;
}

bool overlap(int a0, int a1, int b0, int b1) { return a0 < b1 && b0 < a1; }

struct Axis {
  bool row;  // main axis is x for rows, y for columns
  int start(const BBox& b) const { return row ? b.x : b.y; }
  int end(const BBox& b) const { return row ? b.right() : b.bottom(); }
  bool cross_overlap(const BBox& a, const BBox& b) const {
    return row ? overlap(a.y, a.bottom(), b.y, b.bottom()) : overlap(a.x, a.right(), b.x, b.right());
  }
};

struct Instance {
  bool row;
  std::vector<std::size_t> idx;  // indices into the reading-ordered element list
};

bool same_geometry(const Instance& a, const Instance& b, const std::vector<Placed>& items, int tol) {
  if (a.row != b.row || a.idx.size() != b.idx.size()) return false;
  const BBox& a0 = items[a.idx[0]].box();
  const BBox& b0 = items[b.idx[0]].box();
  for (std::size_t k = 0; k < a.idx.size(); ++k) {
    const Placed& pa = items[a.idx[k]];
    const Placed& pb = items[b.idx[k]];
    if (pa.e->kind != pb.e->kind) return false;
    const BBox& ba = pa.box();
    const BBox& bb = pb.box();
    if (std::abs(ba.w - bb.w) > tol || std::abs(ba.h - bb.h) > tol) return false;
    if (std::abs((ba.x - a0.x) - (bb.x - b0.x)) > tol) return false;
    if (std::abs((ba.y - a0.y) - (bb.y - b0.y)) > tol) return false;
  }
  return true;
}

std::vector<ConstraintNode> multimodal_of(const std::vector<Placed>& items, const ExtractionConfig& cfg) {
  const std::size_t n = items.size();
  std::vector<ConstraintNode> out;
  // next[r][a]: elements directly following a along the row (r=1) or column.
  std::vector<std::vector<std::size_t>> next[2];
  for (int r = 0; r < 2; ++r) {
    const Axis ax{r == 1};
    next[r].assign(n, {});
    for (std::size_t a = 0; a < n; ++a) {
      const BBox& ba = items[a].box();
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        const BBox& bb = items[b].box();
        if (!ax.cross_overlap(ba, bb) || ax.start(bb) < ax.end(ba)) continue;
        bool blocked = false;
        for (std::size_t z = 0; z < n && !blocked; ++z) {
          if (z == a || z == b) continue;
          const BBox& bz = items[z].box();
          blocked = ax.cross_overlap(bz, ba) && ax.cross_overlap(bz, bb) &&
                    ax.start(ba) < ax.start(bz) && ax.start(bz) < ax.start(bb);
        }
        if (!blocked) next[r][a].push_back(b);
      }
    }
  }

  std::vector<bool> used(n, false);
  for (int len = kMaxTupleLength; len >= 2; --len) {
    for (int r = 1; r >= 0; --r) {
      const Axis ax{r == 1};
      std::vector<Instance> instances;
      std::vector<std::size_t> chain;
      auto grow = [&](auto&& self) -> void {
        if (chain.size() == static_cast<std::size_t>(len)) {
          std::set<std::string> kinds;
          for (auto i : chain) kinds.insert(items[i].e->kind);
          if (kinds.size() >= 2) instances.push_back({r == 1, chain});
          return;
        }
        for (std::size_t b : next[r][chain.back()]) {
          bool ok = true;
          for (auto i : chain) ok = ok && ax.cross_overlap(items[i].box(), items[b].box());
          if (!ok) continue;
          chain.push_back(b);
          self(self);
          chain.pop_back();
        }
      };
      for (std::size_t a = 0; a < n; ++a) {
        chain = {a};
        grow(grow);
      }
      std::sort(instances.begin(), instances.end(),
                [](const Instance& x, const Instance& y) { return x.idx < y.idx; });

      std::vector<bool> assigned(instances.size(), false);
      for (std::size_t ref = 0; ref < instances.size(); ++ref) {
        auto uses = [&](const Instance& inst, const std::vector<bool>& mask) {
          return std::any_of(inst.idx.begin(), inst.idx.end(), [&](std::size_t i) { return mask[i]; });
        };
        if (assigned[ref] || uses(instances[ref], used)) continue;
        assigned[ref] = true;
        std::vector<bool> taken = used;
        for (auto i : instances[ref].idx) taken[i] = true;
        std::vector<std::size_t> cluster{ref};
        for (std::size_t k = ref + 1; k < instances.size(); ++k) {
          if (assigned[k] || uses(instances[k], taken)) continue;
          if (!same_geometry(instances[ref], instances[k], items, cfg.tol)) continue;
          assigned[k] = true;
          cluster.push_back(k);
          for (auto i : instances[k].idx) taken[i] = true;
        }
        if (cluster.size() < static_cast<std::size_t>(cfg.min_members)) continue;
        for (auto k : cluster) {
          ConstraintNode c;
          c.kind = ConstraintKind::MultimodalGroup;
          std::vector<const Placed*> ms;
          for (auto i : instances[k].idx) {
            ms.push_back(&items[i]);
            used[i] = true;
          }
          c.members = member_ids(ms);
          out.push_back(std::move(c));
        }
      }
    }
  }
  finish(out);
  return out;
}

}  // namespace

std::vector<ConstraintNode> extract_alignments(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return alignments_of(placed_elements(gui, true), cfg);
}

std::vector<ConstraintNode> extract_same_size(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return sizes_of(placed_elements(gui, true), cfg);
}

std::vector<ConstraintNode> extract_groups(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return groups_of(placed_elements(gui, true), cfg);
}

std::vector<ConstraintNode> extract_multimodal_groups(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return multimodal_of(placed_elements(gui, true), cfg);
}

namespace {

std::vector<ConstraintNode> extract_union(const std::vector<Placed>& items, const ExtractionConfig& cfg) {
  std::vector<ConstraintNode> out;
  for (auto part : {alignments_of(items, cfg), sizes_of(items, cfg), groups_of(items, cfg),
                    multimodal_of(items, cfg)})
    out.insert(out.end(), part.begin(), part.end());
  finish(out);
  return out;
}

}  // namespace

std::vector<ConstraintNode> extract_all(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return extract_union(placed_elements(gui, true), cfg);
}

std::vector<ConstraintNode> extract_placed(const Gui& gui, const ExtractionConfig& cfg) {
  cfg.validate();
  return extract_union(placed_elements(gui, false), cfg);
}

}  // namespace lg
