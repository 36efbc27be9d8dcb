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

#include "layoutgraph/network.hpp"

#include <cmath>

#include "layoutgraph/error.hpp"

namespace lg {

void NetConfig::validate() const {
  embed.validate();
  if (layers < 1) throw ValidationError("net config: layers must be >= 1");
  if (head_hidden < 0) throw ValidationError("net config: head_hidden must be >= 0");
  if (!topics.empty() && topics.size() < 2) throw ValidationError("net config: need at least two topics");
}

nlohmann::json to_json(const NetConfig& cfg) {
  return {{"embed", to_json(cfg.embed)},
          {"layers", cfg.layers},
          {"head_hidden", cfg.head_hidden},
          {"topics", cfg.topics}};
}

NetConfig net_config_from_json(const nlohmann::json& j) {
  NetConfig cfg;
  try {
    if (j.contains("embed")) cfg.embed = embedding_config_from_json(j.at("embed"));
    cfg.layers = j.value("layers", cfg.layers);
    cfg.head_hidden = j.value("head_hidden", cfg.head_hidden);
    cfg.topics = j.value("topics", cfg.topics);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("net config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

BBox denormalize(const std::array<double, 4>& v, int canvas_w, int canvas_h) {
  BBox b;
  b.x = static_cast<int>(std::lround(v[0] * canvas_w));
  b.y = static_cast<int>(std::lround(v[1] * canvas_h));
  b.w = std::max(1, static_cast<int>(std::lround(v[2] * canvas_w)));
  b.h = std::max(1, static_cast<int>(std::lround(v[3] * canvas_h)));
  return b;
}

LayoutNet::LayoutNet(NetConfig cfg, std::uint64_t seed, CorpusStats stats)
    : cfg_(std::move(cfg)), stats_(std::move(stats)) {
  cfg_.validate();
  provider_ = std::make_shared<HashedFeatureProvider>(cfg_.embed.text_dim, cfg_.embed.appearance_dim);
  Rng rng(seed);
  const std::size_t d = cfg_.embed.node_dim, hid = cfg_.hidden();
  emb_ = register_embedding_params(store_, cfg_.embed, rng);
  gnn_ = register_gnn_params(store_, d, cfg_.layers, rng);
  auto dense = [&](const std::string& name, std::size_t in, std::size_t out, ParamId& w, ParamId& b) {
    w = store_.add(name + ".w", xavier_uniform(in, out, rng));
    b = store_.add(name + ".b", Tensor(1, out));
  };
  dense("head.place.1", 2 * d, hid, heads_.place_w1, heads_.place_b1);
  dense("head.place.2", hid, hid, heads_.place_w2, heads_.place_b2);
  dense("head.place.3", hid, 4, heads_.place_w3, heads_.place_b3);
  dense("head.cons.1", 3 * d, hid, heads_.cons_w1, heads_.cons_b1);
  dense("head.cons.2", hid, 1, heads_.cons_w2, heads_.cons_b2);
  dense("head.recon", d, 4, heads_.recon_w, heads_.recon_b);
  const std::size_t topics = std::max<std::size_t>(cfg_.topics.size(), 2);
  dense("head.cls.1", d, kClassifierHidden1, heads_.cls_w1, heads_.cls_b1);
  dense("head.cls.2", kClassifierHidden1, kClassifierHidden2, heads_.cls_w2, heads_.cls_b2);
  dense("head.cls.3", kClassifierHidden2, topics, heads_.cls_w3, heads_.cls_b3);
}

LayoutNet::Encoding LayoutNet::encode(Tape& tape, const LayoutGraph& graph) const {
  if (graph.element_count() == 0) throw ValidationError("encode: graph has no element nodes");
  Encoding enc;
  enc.kinds = index_by_kind(graph);
  enc.element_count = graph.element_count();
  enc.constraint_count = graph.constraint_count();
  std::vector<const Element*> els;
  for (const auto& e : graph.elements) els.push_back(&e);
  const FeatureContext ctx{&cfg_.embed, &stats_, provider_.get()};
  Var x = element_features(tape, store_, emb_, ctx, els, false);
  std::array<Var, kConstraintKinds> cf;
  enc.stacked_row.assign(graph.constraint_count(), 0);
  std::size_t row = 0;
  for (std::size_t k = 0; k < kConstraintKinds; ++k) {
    std::vector<const ConstraintNode*> cs;
    for (std::size_t j : enc.kinds[k]) {
      cs.push_back(&graph.constraints[j]);
      enc.stacked_row[j] = row++;
    }
    cf[k] = constraint_features(tape, store_, emb_, cfg_.embed, kAllConstraintKinds[k], cs, graph.canvas_w,
                                graph.canvas_h);
  }
  enc.nodes = gnn_forward(tape, store_, gnn_, graph, x, cf);
  enc.h_g = graph_embedding(tape, store_, gnn_, enc.nodes);
  return enc;
}

Var LayoutNet::encode_target(Tape& tape, const Element& target) const {
  const FeatureContext ctx{&cfg_.embed, &stats_, provider_.get()};
  return gnn_isolated(tape, store_, gnn_, element_features(tape, store_, emb_, ctx, {&target}, true));
}

namespace {

Var dense(Tape& tape, const ParamStore& s, Var x, ParamId w, ParamId b) {
  return add(matmul(x, tape.param(s, w)), tape.param(s, b));
}

}  // namespace

Var LayoutNet::placement(Tape& tape, Var h_t, Var h_g) const {
  Var h = relu(dense(tape, store_, concat({h_t, h_g}), heads_.place_w1, heads_.place_b1));
  h = relu(dense(tape, store_, h, heads_.place_w2, heads_.place_b2));
  return dense(tape, store_, h, heads_.place_w3, heads_.place_b3);
}

Var LayoutNet::constraint_probs(Tape& tape, Var h_t, const Encoding& enc) const {
  const std::size_t n = enc.constraint_count;
  if (n == 0) return tape.constant(Tensor(0, 1));
  std::vector<Var> parts;
  for (std::size_t k = 0; k < kConstraintKinds; ++k)
    if (enc.nodes.con[k].rows()) parts.push_back(enc.nodes.con[k]);
  Var hc = gather_rows(concat_rows(parts), enc.stacked_row);
  Var in = concat({repeat_rows(h_t, n), repeat_rows(enc.h_g, n), hc});
  Var h = relu(dense(tape, store_, in, heads_.cons_w1, heads_.cons_b1));
  return sigmoid(dense(tape, store_, h, heads_.cons_w2, heads_.cons_b2));
}

Var LayoutNet::reconstruct(Tape& tape, const Encoding& enc) const {
  return dense(tape, store_, enc.nodes.ele, heads_.recon_w, heads_.recon_b);
}

Var LayoutNet::classify_logits(Tape& tape, Var h_g) const {
  Var h = relu(dense(tape, store_, h_g, heads_.cls_w1, heads_.cls_b1));
  h = relu(dense(tape, store_, h, heads_.cls_w2, heads_.cls_b2));
  return dense(tape, store_, h, heads_.cls_w3, heads_.cls_b3);
}

Checkpoint LayoutNet::to_checkpoint(nlohmann::json meta) const {
  if (!meta.is_object()) meta = nlohmann::json::object();
  meta["config"] = to_json(cfg_);
  meta["corpus_stats"] = to_json(stats_);
  return checkpoint_from_params(store_, std::move(meta));
}

LayoutNet LayoutNet::from_checkpoint(const Checkpoint& ck) {
  if (!ck.meta.contains("config")) throw ValidationError("checkpoint: missing model config");
  NetConfig cfg = net_config_from_json(ck.meta.at("config"));
  CorpusStats stats;
  if (ck.meta.contains("corpus_stats")) stats = corpus_stats_from_json(ck.meta.at("corpus_stats"));
  LayoutNet net(std::move(cfg), 0, std::move(stats));
  load_params(net.store_, ck);
  return net;
}

}  // namespace lg
