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

// Downstream uses of the graph embedding h_G: topic classification and
// nearest-neighbour retrieval over an embedding index.

#ifndef LAYOUTGRAPH_TASKS_HPP_
#define LAYOUTGRAPH_TASKS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "layoutgraph/checkpoint.hpp"
#include "layoutgraph/extract.hpp"
#include "layoutgraph/network.hpp"
#include "layoutgraph/train.hpp"

namespace lg {

// Throws ValidationError unless the checkpoint metadata lists task among the
// tasks it was trained on.
void require_trained(const Checkpoint& ck, TrainTask task);
// Records task in meta["tasks"] (kept sorted and unique).
void mark_trained(nlohmann::json& meta, TrainTask task);

// h_G of the placed part of a GUI. Throws ValidationError when nothing is placed.
std::vector<double> gui_embedding(const LayoutNet& net, const Gui& gui, const ExtractionConfig& ext = {});

struct Classification {
  std::size_t index = 0;
  std::string label;
  std::vector<double> probs;
};

Classification classify(const LayoutNet& net, const Gui& gui, const ExtractionConfig& ext = {});

enum class Metric { Euclidean, Cosine };
std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct EmbeddingIndex {
  Metric metric = Metric::Euclidean;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> vectors;

  std::size_t size() const { return ids.size(); }
};

// Throws ValidationError on duplicate ids or a size mismatch.
EmbeddingIndex build_index(const LayoutNet& net, const std::vector<Gui>& guis, const std::vector<std::string>& ids,
                           Metric metric = Metric::Euclidean, const ExtractionConfig& ext = {});

double distance(Metric m, const std::vector<double>& a, const std::vector<double>& b);

struct Neighbor {
  std::string id;
  double distance = 0.0;
};

// k nearest entries, ascending by distance then id. The query itself is
// excluded: the entry named query_id, or without one every entry whose
// vector equals the query bit for bit. Throws ValidationError unless
// 1 <= k <= the number of remaining entries.
std::vector<Neighbor> retrieve(const EmbeddingIndex& index, const std::vector<double>& query, std::size_t k,
                               const std::optional<std::string>& query_id = std::nullopt);

Checkpoint index_to_checkpoint(const EmbeddingIndex& index);
EmbeddingIndex index_from_checkpoint(const Checkpoint& ck);

}  // namespace lg

#endif  // LAYOUTGRAPH_TASKS_HPP_
