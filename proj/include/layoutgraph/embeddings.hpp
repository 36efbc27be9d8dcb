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

// Element and constraint feature construction.
//
// An element row is
//   [pos(x1) pos(y1) pos(x2) pos(y2) | size(w) size(h) | appearance | text | type | log(ratio)]
// followed by a trainable linear projection to node_dim. For an unplaced
// target the position and size blocks are replaced by one learned
// placeholder row, so no stale geometry can leak in.
//
// Constraint rows are the per-kind attribute vectors (line and size values
// divided by the canvas extent on their axis) projected per kind.

#ifndef LAYOUTGRAPH_EMBEDDINGS_HPP_
#define LAYOUTGRAPH_EMBEDDINGS_HPP_

#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/model.hpp"

namespace lg {

struct EmbeddingConfig {
  int coord_dim = 16;
  int node_dim = 256;
  int type_dim = 16;
  int text_dim = 64;
  int appearance_dim = 64;
  int unk_threshold = 3;
  // Largest coordinate the tables can index; rows = max_coord + 1.
  int max_coord = 2560;
  Vocabulary vocab = Vocabulary::standard();

  void validate() const;
  // Width of the concatenated element row before projection.
  std::size_t element_row_dim() const;
};

nlohmann::json to_json(const EmbeddingConfig& cfg);
EmbeddingConfig embedding_config_from_json(const nlohmann::json& j);

// Per-string frequencies over a training split.
struct CorpusStats {
  std::map<std::string, int> counts;

  void add_gui(const Gui& gui);
  int count(const std::string& text) const;
};

nlohmann::json to_json(const CorpusStats& stats);
CorpusStats corpus_stats_from_json(const nlohmann::json& j);

class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual std::size_t text_dim() const = 0;
  virtual std::size_t appearance_dim() const = 0;
  virtual std::vector<double> text(const std::string& s) const = 0;
  virtual std::vector<double> unk() const = 0;
  virtual std::vector<double> appearance(const std::vector<double>& raw) const = 0;
};

// Signed feature hashing of lower-cased alphanumeric tokens, L2-normalised.
// Appearance vectors of any width are folded into appearance_dim buckets.
class HashedFeatureProvider final : public FeatureProvider {
 public:
  HashedFeatureProvider(std::size_t text_dim, std::size_t appearance_dim);
  std::size_t text_dim() const override { return text_dim_; }
  std::size_t appearance_dim() const override { return appearance_dim_; }
  std::vector<double> text(const std::string& s) const override;
  std::vector<double> unk() const override;
  std::vector<double> appearance(const std::vector<double>& raw) const override;

 private:
  std::size_t text_dim_;
  std::size_t appearance_dim_;
};

std::uint64_t fnv1a(std::string_view s);

// Absent text is zero; text seen fewer than unk_threshold times is UNK.
std::vector<double> embed_text(const std::optional<std::string>& text, const CorpusStats& stats,
                               const FeatureProvider& provider, int unk_threshold);

struct EmbeddingParams {
  ParamId pos_table, size_table, type_matrix, placeholder, proj_w, proj_b;
  ParamId align_w, align_b, same_size_w, same_size_b;
  ParamId eg_slot, eg_w, eg_b, mg_slot, mg_w, mg_b;
};

EmbeddingParams register_embedding_params(ParamStore& store, const EmbeddingConfig& cfg, Rng& rng);

// Throw ValidationError for coordinates outside the table.
Var embed_position(Var pos_table, const BBox& box);
Var embed_size(Var size_table, int w, int h);
Var embed_type(Var type_matrix, const Vocabulary& vocab, const std::string& kind);

struct FeatureContext {
  const EmbeddingConfig* cfg = nullptr;
  const CorpusStats* stats = nullptr;
  const FeatureProvider* provider = nullptr;
};

// n x node_dim features for placed elements (as_target = false) or for
// unplaced targets (as_target = true, bbox ignored).
Var element_features(Tape& tape, const ParamStore& store, const EmbeddingParams& p, const FeatureContext& ctx,
                     const std::vector<const Element*>& elements, bool as_target);

// Attribute vector with canvas-normalised line and size values.
std::vector<double> normalized_attr(const ConstraintNode& c, int canvas_w, int canvas_h);

// n x node_dim features for constraints that all share one kind.
Var constraint_features(Tape& tape, const ParamStore& store, const EmbeddingParams& p, const EmbeddingConfig& cfg,
                        ConstraintKind kind, const std::vector<const ConstraintNode*>& constraints, int canvas_w,
                        int canvas_h);

}  // namespace lg

#endif  // LAYOUTGRAPH_EMBEDDINGS_HPP_
