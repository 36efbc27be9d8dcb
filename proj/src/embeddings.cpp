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

#include "layoutgraph/embeddings.hpp"

#include <cctype>
#include <cmath>

#include "layoutgraph/error.hpp"

namespace lg {

void EmbeddingConfig::validate() const {
  if (coord_dim < 1 || node_dim < 1 || type_dim < 1 || text_dim < 1 || appearance_dim < 1)
    throw ValidationError("embedding config: all dims must be >= 1");
  if (unk_threshold < 0) throw ValidationError("embedding config: unk_threshold must be >= 0");
  if (max_coord < 1) throw ValidationError("embedding config: max_coord must be >= 1");
  if (vocab.size() == 0) throw ValidationError("embedding config: empty vocabulary");
}

std::size_t EmbeddingConfig::element_row_dim() const {
  return 6 * static_cast<std::size_t>(coord_dim) + appearance_dim + text_dim + type_dim + 1;
}

nlohmann::json to_json(const EmbeddingConfig& cfg) {
  return {{"coord_dim", cfg.coord_dim},           {"node_dim", cfg.node_dim},
          {"type_dim", cfg.type_dim},             {"text_dim", cfg.text_dim},
          {"appearance_dim", cfg.appearance_dim}, {"unk_threshold", cfg.unk_threshold},
          {"max_coord", cfg.max_coord},           {"vocab", cfg.vocab.kinds()}};
}

EmbeddingConfig embedding_config_from_json(const nlohmann::json& j) {
  EmbeddingConfig cfg;
  try {
    cfg.coord_dim = j.value("coord_dim", cfg.coord_dim);
    cfg.node_dim = j.value("node_dim", cfg.node_dim);
    cfg.type_dim = j.value("type_dim", cfg.type_dim);
    cfg.text_dim = j.value("text_dim", cfg.text_dim);
    cfg.appearance_dim = j.value("appearance_dim", cfg.appearance_dim);
    cfg.unk_threshold = j.value("unk_threshold", cfg.unk_threshold);
    cfg.max_coord = j.value("max_coord", cfg.max_coord);
    if (j.contains("vocab")) cfg.vocab = Vocabulary(j.at("vocab").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("embedding config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void CorpusStats::add_gui(const Gui& gui) {
  for (const auto& e : gui.elements)
    if (e.text) ++counts[*e.text];
}

int CorpusStats::count(const std::string& text) const {
  auto it = counts.find(text);
  return it == counts.end() ? 0 : it->second;
}

nlohmann::json to_json(const CorpusStats& stats) { return stats.counts; }

CorpusStats corpus_stats_from_json(const nlohmann::json& j) {
  CorpusStats s;
  try {
    s.counts = j.get<std::map<std::string, int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("corpus stats: ") + e.what());
  }
  return s;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

HashedFeatureProvider::HashedFeatureProvider(std::size_t text_dim, std::size_t appearance_dim)
    : text_dim_(text_dim), appearance_dim_(appearance_dim) {
  if (text_dim == 0 || appearance_dim == 0) throw ValidationError("feature provider: dims must be >= 1");
}

namespace {

void normalize(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  if (n > 0.0) {
    n = std::sqrt(n);
    for (double& x : v) x /= n;
  }
}

void hash_into(std::vector<double>& v, std::string_view token) {
  const std::uint64_t h = fnv1a(token);
  v[h % v.size()] += (h >> 63) ? -1.0 : 1.0;
}

}  // namespace

std::vector<double> HashedFeatureProvider::text(const std::string& s) const {
  std::vector<double> v(text_dim_, 0.0);
  std::string token;
  bool any = false;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const unsigned char c = i < s.size() ? static_cast<unsigned char>(s[i]) : ' ';
    if (std::isalnum(c) || c >= 0x80) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else if (!token.empty()) {
      hash_into(v, token);
      token.clear();
      any = true;
    }
  }
  if (!any && !s.empty()) hash_into(v, s);
  normalize(v);
  return v;
}

std::vector<double> HashedFeatureProvider::unk() const {
  std::vector<double> v(text_dim_, 0.0);
  hash_into(v, "\x01[UNK]");
  normalize(v);
  return v;
}

std::vector<double> HashedFeatureProvider::appearance(const std::vector<double>& raw) const {
  std::vector<double> v(appearance_dim_, 0.0);
  for (std::size_t i = 0; i < raw.size(); ++i) v[i % appearance_dim_] += raw[i];
  return v;
}

std::vector<double> embed_text(const std::optional<std::string>& text, const CorpusStats& stats,
                               const FeatureProvider& provider, int unk_threshold) {
  if (!text) return std::vector<double>(provider.text_dim(), 0.0);
  if (stats.count(*text) < unk_threshold) return provider.unk();
  return provider.text(*text);
}

namespace {

constexpr double kMinCoordPeriod = 16.0;

// Coordinate tables start as random Fourier features (unit amplitude, periods
// log-uniform from kMinCoordPeriod px to four table lengths), so nearby
// coordinates start with nearby rows.
Tensor smooth_table(std::size_t rows, std::size_t cols, Rng& rng) {
  const double lo = std::log(kMinCoordPeriod), hi = std::log(std::max(kMinCoordPeriod, 4.0 * rows));
  Tensor t(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const double omega = 2.0 * M_PI / std::exp(rng.uniform(lo, hi));
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    for (std::size_t r = 0; r < rows; ++r) t(r, j) = std::cos(omega * static_cast<double>(r) + phase);
  }
  return t;
}

}  // namespace

EmbeddingParams register_embedding_params(ParamStore& store, const EmbeddingConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t c = cfg.coord_dim, d = cfg.node_dim, rows = cfg.max_coord + 1;
  EmbeddingParams p;
  p.pos_table = store.add("embed.pos", smooth_table(rows, c, rng));
  p.size_table = store.add("embed.size", smooth_table(rows, c, rng));
  p.type_matrix = store.add("embed.type", xavier_uniform(cfg.vocab.size(), cfg.type_dim, rng));
  p.placeholder = store.add("embed.placeholder", xavier_uniform(1, 6 * c, rng));
  p.proj_w = store.add("embed.proj.w", xavier_uniform(cfg.element_row_dim(), d, rng));
  p.proj_b = store.add("embed.proj.b", Tensor(1, d));
  p.align_w = store.add("embed.align.w", xavier_uniform(kAlignAttrDim, d, rng));
  p.align_b = store.add("embed.align.b", Tensor(1, d));
  p.same_size_w = store.add("embed.same_size.w", xavier_uniform(kSizeAttrDim, d, rng));
  p.same_size_b = store.add("embed.same_size.b", Tensor(1, d));
  p.eg_slot = store.add("embed.eg.slot", Tensor(1, kGroupSlotDim));
  p.eg_w = store.add("embed.eg.w", xavier_uniform(kGroupSlotDim, d, rng));
  p.eg_b = store.add("embed.eg.b", Tensor(1, d));
  p.mg_slot = store.add("embed.mg.slot", Tensor(1, kGroupSlotDim));
  p.mg_w = store.add("embed.mg.w", xavier_uniform(kGroupSlotDim, d, rng));
  p.mg_b = store.add("embed.mg.b", Tensor(1, d));
  return p;
}

namespace {

std::size_t coord_index(const Tensor& table, int v, const char* what) {
  if (v < 0 || static_cast<std::size_t>(v) >= table.rows())
    throw ValidationError(std::string(what) + " " + std::to_string(v) + " outside the embedding table [0, " +
                          std::to_string(table.rows() - 1) + "]");
  return static_cast<std::size_t>(v);
}

}  // namespace

Var embed_position(Var pos_table, const BBox& box) {
  const Tensor& t = pos_table.value();
  const std::vector<std::size_t> idx{coord_index(t, box.x, "coordinate"), coord_index(t, box.y, "coordinate"),
                                     coord_index(t, box.right(), "coordinate"),
                                     coord_index(t, box.bottom(), "coordinate")};
  std::vector<Var> parts;
  for (auto i : idx) parts.push_back(lookup_row(pos_table, i));
  return concat(parts);
}

Var embed_size(Var size_table, int w, int h) {
  const Tensor& t = size_table.value();
  if (w < 1 || h < 1) throw ValidationError("size must be >= 1");
  const std::size_t wi = coord_index(t, w, "width"), hi = coord_index(t, h, "height");
  return concat({lookup_row(size_table, wi), lookup_row(size_table, hi)});
}

Var embed_type(Var type_matrix, const Vocabulary& vocab, const std::string& kind) {
  return lookup_row(type_matrix, vocab.index_of(kind));
}

Var element_features(Tape& tape, const ParamStore& store, const EmbeddingParams& p, const FeatureContext& ctx,
                     const std::vector<const Element*>& elements, bool as_target) {
  const EmbeddingConfig& cfg = *ctx.cfg;
  if (ctx.provider->text_dim() != static_cast<std::size_t>(cfg.text_dim) ||
      ctx.provider->appearance_dim() != static_cast<std::size_t>(cfg.appearance_dim))
    throw ShapeError("element features: provider dims do not match the config");
  const std::size_t n = elements.size();
  Var proj_w = tape.param(store, p.proj_w);
  Var proj_b = tape.param(store, p.proj_b);
  if (n == 0) return tape.constant(Tensor(0, cfg.node_dim));

  std::vector<Var> blocks;
  if (as_target) {
    blocks.push_back(repeat_rows(tape.param(store, p.placeholder), n));
  } else {
    Var pos = tape.param(store, p.pos_table);
    Var size = tape.param(store, p.size_table);
    const Tensor& pt = pos.value();
    std::vector<std::size_t> x1, y1, x2, y2, w, h;
    for (const Element* e : elements) {
      if (!e->bbox) throw ValidationError("element features: '" + e->id + "' is unplaced");
      const BBox& b = *e->bbox;
      x1.push_back(coord_index(pt, b.x, "coordinate"));
      y1.push_back(coord_index(pt, b.y, "coordinate"));
      x2.push_back(coord_index(pt, b.right(), "coordinate"));
      y2.push_back(coord_index(pt, b.bottom(), "coordinate"));
      w.push_back(coord_index(pt, b.w, "width"));
      h.push_back(coord_index(pt, b.h, "height"));
    }
    for (const auto* idx : {&x1, &y1, &x2, &y2}) blocks.push_back(gather_rows(pos, *idx));
    blocks.push_back(gather_rows(size, w));
    blocks.push_back(gather_rows(size, h));
  }
  Tensor fixed(n, cfg.appearance_dim + cfg.text_dim);
  Tensor ratio(n, 1);
  std::vector<std::size_t> kinds;
  for (std::size_t i = 0; i < n; ++i) {
    const Element& e = *elements[i];
    std::vector<double> app = e.appearance ? ctx.provider->appearance(*e.appearance)
                                           : std::vector<double>(cfg.appearance_dim, 0.0);
    std::vector<double> txt = embed_text(e.text, *ctx.stats, *ctx.provider, cfg.unk_threshold);
    std::copy(app.begin(), app.end(), fixed.row_span(i).begin());
    std::copy(txt.begin(), txt.end(), fixed.row_span(i).begin() + cfg.appearance_dim);
    if (!(e.aspect_ratio > 0.0)) throw ValidationError("element features: nonpositive aspect ratio");
    ratio(i, 0) = std::log(e.aspect_ratio);
    kinds.push_back(cfg.vocab.index_of(e.kind));
  }
  blocks.push_back(tape.constant(std::move(fixed)));
  blocks.push_back(gather_rows(tape.param(store, p.type_matrix), kinds));
  blocks.push_back(tape.constant(std::move(ratio)));
  Var row = concat(blocks);
  if (row.cols() != cfg.element_row_dim()) throw ShapeError("element features: row width mismatch");
  return add(matmul(row, proj_w), proj_b);
}

std::vector<double> normalized_attr(const ConstraintNode& c, int canvas_w, int canvas_h) {
  std::vector<double> a = c.attr();
  if (c.kind == ConstraintKind::Alignment) {
    a[6] /= canvas_w;
    a[7] /= canvas_h;
  } else if (c.kind == ConstraintKind::SameSize) {
    a[0] /= canvas_w;
    a[1] /= canvas_h;
  }
  return a;
}

Var constraint_features(Tape& tape, const ParamStore& store, const EmbeddingParams& p, const EmbeddingConfig& cfg,
                        ConstraintKind kind, const std::vector<const ConstraintNode*>& constraints, int canvas_w,
                        int canvas_h) {
  const std::size_t n = constraints.size();
  for (const ConstraintNode* c : constraints)
    if (c->kind != kind) throw ValidationError("constraint features: mixed kinds in one batch");
  if (n == 0) return tape.constant(Tensor(0, cfg.node_dim));
  switch (kind) {
    case ConstraintKind::Alignment:
    case ConstraintKind::SameSize: {
      const std::size_t width = kind == ConstraintKind::Alignment ? kAlignAttrDim : kSizeAttrDim;
      Tensor attrs(n, width);
      for (std::size_t i = 0; i < n; ++i) {
        auto a = normalized_attr(*constraints[i], canvas_w, canvas_h);
        if (a.size() != width) throw ShapeError("constraint features: attr width mismatch");
        std::copy(a.begin(), a.end(), attrs.row_span(i).begin());
      }
      const bool al = kind == ConstraintKind::Alignment;
      return add(matmul(tape.constant(std::move(attrs)), tape.param(store, al ? p.align_w : p.same_size_w)),
                 tape.param(store, al ? p.align_b : p.same_size_b));
    }
    default: {
      const bool eg = kind == ConstraintKind::ElementGroup;
      Var slot = repeat_rows(tape.param(store, eg ? p.eg_slot : p.mg_slot), n);
      return add(matmul(slot, tape.param(store, eg ? p.eg_w : p.mg_w)), tape.param(store, eg ? p.eg_b : p.mg_b));
    }
  }
}

}  // namespace lg
