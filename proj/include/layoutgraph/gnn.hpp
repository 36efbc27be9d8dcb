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

// Heterogeneous mean-aggregation message passing over the bipartite layout
// graph, and the per-kind weighted readout into one graph embedding.
//
// Row-vector convention throughout: a node state is a row h and a layer maps
// it as h * W. With N(v) the neighbours of v,
//   element:     h'_e = relu(h_e W_self + mean_{c in N(e)} h_c W_in[kind(c)])
//   constraint:  h'_c = relu(h_c W_self[kind(c)] + mean_{e in N(c)} h_e W_out[kind(c)])
// Isolated nodes see a zero neighbour mean.

#ifndef LAYOUTGRAPH_GNN_HPP_
#define LAYOUTGRAPH_GNN_HPP_

#include <array>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/model.hpp"

namespace lg {

inline constexpr std::size_t kConstraintKinds = 4;
inline constexpr std::array<ConstraintKind, kConstraintKinds> kAllConstraintKinds = {
    ConstraintKind::Alignment, ConstraintKind::SameSize, ConstraintKind::ElementGroup,
    ConstraintKind::MultimodalGroup};
std::size_t kind_slot(ConstraintKind kind);

struct GnnLayerParams {
  ParamId ele_self;
  std::array<ParamId, kConstraintKinds> ele_neigh;  // constraint -> element, per kind
  std::array<ParamId, kConstraintKinds> con_self;
  std::array<ParamId, kConstraintKinds> con_neigh;  // element -> constraint, per kind
};

struct GnnParams {
  std::vector<GnnLayerParams> layers;
  ParamId readout_ele;
  std::array<ParamId, kConstraintKinds> readout_con;
};

GnnParams register_gnn_params(ParamStore& store, std::size_t node_dim, std::size_t layers, Rng& rng);

// Constraint indices of a graph grouped by kind, each list in graph order.
using KindIndex = std::array<std::vector<std::size_t>, kConstraintKinds>;
KindIndex index_by_kind(const LayoutGraph& graph);

struct NodeEmbeddings {
  Var ele;                                  // M x d
  std::array<Var, kConstraintKinds> con;   // n_k x d, rows follow KindIndex order
};

// con_features[k] must have one row per constraint of kind k in KindIndex order.
NodeEmbeddings gnn_forward(Tape& tape, const ParamStore& store, const GnnParams& p, const LayoutGraph& graph,
                           Var ele_features, const std::array<Var, kConstraintKinds>& con_features);

// L layers applied to nodes without neighbours: relu(h W_self) repeatedly.
Var gnn_isolated(Tape& tape, const ParamStore& store, const GnnParams& p, Var features);

// avg(h_ele) W_ele + sum_k avg(h_k) W_k; kinds without nodes contribute zero.
// Throws ValidationError when there are no element nodes.
Var graph_embedding(Tape& tape, const ParamStore& store, const GnnParams& p, const NodeEmbeddings& h);

}  // namespace lg

#endif  // LAYOUTGRAPH_GNN_HPP_
