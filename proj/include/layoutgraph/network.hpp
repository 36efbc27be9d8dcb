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

// The full trainable model: embeddings, message passing, graph readout and
// the task heads, with checkpoint conversion.
//
// Targets are encoded as isolated element nodes: an unplaced element
// satisfies no constraint yet, so it has no edges in the partial graph and
// the partial-graph encoding can be shared by every target queried on it.

#ifndef LAYOUTGRAPH_NETWORK_HPP_
#define LAYOUTGRAPH_NETWORK_HPP_

#include <cstdint>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/checkpoint.hpp"
#include "layoutgraph/embeddings.hpp"
#include "layoutgraph/gnn.hpp"
#include "layoutgraph/model.hpp"

namespace lg {

struct NetConfig {
  EmbeddingConfig embed;
  int layers = 2;
  int head_hidden = 0;  // 0 means node_dim
  std::vector<std::string> topics;

  void validate() const;
  std::size_t hidden() const { return head_hidden > 0 ? head_hidden : embed.node_dim; }
};

nlohmann::json to_json(const NetConfig& cfg);
NetConfig net_config_from_json(const nlohmann::json& j);

struct HeadParams {
  ParamId place_w1, place_b1, place_w2, place_b2, place_w3, place_b3;
  ParamId cons_w1, cons_b1, cons_w2, cons_b2;
  ParamId recon_w, recon_b;
  ParamId cls_w1, cls_b1, cls_w2, cls_b2, cls_w3, cls_b3;
};

inline constexpr std::size_t kClassifierHidden1 = 256;
inline constexpr std::size_t kClassifierHidden2 = 64;

// Canvas-normalised (x, y, w, h) to a pixel box: rounded, sizes at least 1.
BBox denormalize(const std::array<double, 4>& v, int canvas_w, int canvas_h);

class LayoutNet {
 public:
  LayoutNet(NetConfig cfg, std::uint64_t seed, CorpusStats stats = {});

  const NetConfig& config() const { return cfg_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }
  const CorpusStats& stats() const { return stats_; }
  void set_stats(CorpusStats stats) { stats_ = std::move(stats); }
  const FeatureProvider& provider() const { return *provider_; }

  struct Encoding {
    NodeEmbeddings nodes;
    Var h_g;
    KindIndex kinds;
    // Row of each graph constraint inside the kind-stacked constraint matrix.
    std::vector<std::size_t> stacked_row;
    std::size_t element_count = 0;
    std::size_t constraint_count = 0;
  };

  // Throws ValidationError for a graph without element nodes.
  Encoding encode(Tape& tape, const LayoutGraph& graph) const;
  // Final embedding of an unplaced target (1 x node_dim).
  Var encode_target(Tape& tape, const Element& target) const;
  // 1 x 4 canvas-normalised placement.
  Var placement(Tape& tape, Var h_t, Var h_g) const;
  // N x 1 probabilities in graph constraint order (0 x 1 when N = 0).
  Var constraint_probs(Tape& tape, Var h_t, const Encoding& enc) const;
  // M x 4 canvas-normalised reconstruction of every element node.
  Var reconstruct(Tape& tape, const Encoding& enc) const;
  Var classify_logits(Tape& tape, Var h_g) const;

  Checkpoint to_checkpoint(nlohmann::json meta) const;
  static LayoutNet from_checkpoint(const Checkpoint& ck);

 private:
  NetConfig cfg_;
  CorpusStats stats_;
  std::shared_ptr<const FeatureProvider> provider_;
  ParamStore store_;
  EmbeddingParams emb_;
  GnnParams gnn_;
  HeadParams heads_;
};

}  // namespace lg

#endif  // LAYOUTGRAPH_NETWORK_HPP_
