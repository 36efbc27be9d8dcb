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

#include "layoutgraph/gnn.hpp"

#include <string>

#include "layoutgraph/error.hpp"

namespace lg {

namespace {

const char* const kKindTag[kConstraintKinds] = {"align", "size", "eg", "mg"};

}  // namespace

std::size_t kind_slot(ConstraintKind kind) { return static_cast<std::size_t>(kind); }

GnnParams register_gnn_params(ParamStore& store, std::size_t node_dim, std::size_t layers, Rng& rng) {
  if (layers < 1) throw ValidationError("gnn: at least one layer required");
  const std::size_t d = node_dim;
  GnnParams p;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::string pre = "gnn.l" + std::to_string(l) + ".";
    GnnLayerParams lp;
    lp.ele_self = store.add(pre + "ele.self", xavier_uniform(d, d, rng));
    for (std::size_t k = 0; k < kConstraintKinds; ++k) {
      lp.ele_neigh[k] = store.add(pre + "ele.neigh." + kKindTag[k], xavier_uniform(d, d, rng));
      lp.con_self[k] = store.add(pre + kKindTag[k] + ".self", xavier_uniform(d, d, rng));
      lp.con_neigh[k] = store.add(pre + kKindTag[k] + ".neigh", xavier_uniform(d, d, rng));
    }
    p.layers.push_back(lp);
  }
  p.readout_ele = store.add("readout.ele", xavier_uniform(d, d, rng));
  for (std::size_t k = 0; k < kConstraintKinds; ++k)
    p.readout_con[k] = store.add(std::string("readout.") + kKindTag[k], xavier_uniform(d, d, rng));
  return p;
}

KindIndex index_by_kind(const LayoutGraph& graph) {
  KindIndex idx;
  for (std::size_t j = 0; j < graph.constraint_count(); ++j) idx[kind_slot(graph.constraints[j].kind)].push_back(j);
  return idx;
}

NodeEmbeddings gnn_forward(Tape& tape, const ParamStore& store, const GnnParams& p, const LayoutGraph& graph,
                           Var ele_features, const std::array<Var, kConstraintKinds>& con_features) {
  const std::size_t m = graph.element_count();
  const KindIndex idx = index_by_kind(graph);
  if (ele_features.rows() != m) throw ShapeError("gnn: element feature rows do not match the graph");
  for (std::size_t k = 0; k < kConstraintKinds; ++k)
    if (con_features[k].rows() != idx[k].size()) throw ShapeError("gnn: constraint feature rows do not match the graph");

  // Row-normalised aggregation matrices, fixed for all layers.
  std::array<Var, kConstraintKinds> to_ele, to_con;
  for (std::size_t k = 0; k < kConstraintKinds; ++k) {
    const std::size_t n = idx[k].size();
    if (n == 0) continue;
    Tensor a(m, n), b(n, m);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& members = graph.constraint_neighbors[idx[k][r]];
      for (std::size_t e : members) {
        a(e, r) = 1.0 / static_cast<double>(graph.element_neighbors[e].size());
        b(r, e) = 1.0 / static_cast<double>(members.size());
      }
    }
    to_ele[k] = tape.constant(std::move(a));
    to_con[k] = tape.constant(std::move(b));
  }

  NodeEmbeddings h{ele_features, con_features};
  for (const GnnLayerParams& lp : p.layers) {
    NodeEmbeddings next = h;
    Var pre = matmul(h.ele, tape.param(store, lp.ele_self));
    for (std::size_t k = 0; k < kConstraintKinds; ++k) {
      if (idx[k].empty()) continue;
      pre = add(pre, matmul(matmul(to_ele[k], h.con[k]), tape.param(store, lp.ele_neigh[k])));
      Var cpre = add(matmul(h.con[k], tape.param(store, lp.con_self[k])),
                     matmul(matmul(to_con[k], h.ele), tape.param(store, lp.con_neigh[k])));
      next.con[k] = relu(cpre);
    }
    next.ele = relu(pre);
    h = next;
  }
  return h;
}

Var gnn_isolated(Tape& tape, const ParamStore& store, const GnnParams& p, Var features) {
  Var h = features;
  for (const GnnLayerParams& lp : p.layers) h = relu(matmul(h, tape.param(store, lp.ele_self)));
  return h;
}

Var graph_embedding(Tape& tape, const ParamStore& store, const GnnParams& p, const NodeEmbeddings& h) {
  if (h.ele.rows() == 0) throw ValidationError("graph embedding: graph has no element nodes");
  Var g = matmul(mean_rows(h.ele), tape.param(store, p.readout_ele));
  for (std::size_t k = 0; k < kConstraintKinds; ++k) {
    if (h.con[k].rows() == 0) continue;
    g = add(g, matmul(mean_rows(h.con[k]), tape.param(store, p.readout_con[k])));
  }
  return g;
}

}  // namespace lg
