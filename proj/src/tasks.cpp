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

#include "layoutgraph/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "layoutgraph/autocomplete.hpp"
#include "layoutgraph/error.hpp"

namespace lg {

void require_trained(const Checkpoint& ck, TrainTask task) {
  const auto it = ck.meta.find("tasks");
  if (it != ck.meta.end() && it->is_array())
    for (const auto& t : *it)
      if (t.is_string() && t.get<std::string>() == to_string(task)) return;
  throw ValidationError("checkpoint was not trained for " + std::string(to_string(task)));
}

void mark_trained(nlohmann::json& meta, TrainTask task) {
  std::set<std::string> tasks;
  if (meta.contains("tasks") && meta["tasks"].is_array())
    for (const auto& t : meta["tasks"])
      if (t.is_string()) tasks.insert(t.get<std::string>());
  tasks.insert(std::string(to_string(task)));
  meta["tasks"] = std::vector<std::string>(tasks.begin(), tasks.end());
}

std::vector<double> gui_embedding(const LayoutNet& net, const Gui& gui, const ExtractionConfig& ext) {
  if (gui.placed_count() == 0) throw ValidationError("embedding: GUI has no placed element");
  Tape tape;
  const auto enc = net.encode(tape, partial_graph(gui, ext));
  return enc.h_g.value().row_vector(0);
}

Classification classify(const LayoutNet& net, const Gui& gui, const ExtractionConfig& ext) {
  if (gui.placed_count() == 0) throw ValidationError("classify: GUI has no placed element");
  Tape tape;
  const auto enc = net.encode(tape, partial_graph(gui, ext));
  const Tensor probs = softmax(net.classify_logits(tape, enc.h_g)).value();
  Classification c;
  c.probs = probs.row_vector(0);
  c.index = static_cast<std::size_t>(std::max_element(c.probs.begin(), c.probs.end()) - c.probs.begin());
  const auto& topics = net.config().topics;
  c.label = c.index < topics.size() ? topics[c.index] : std::to_string(c.index);
  return c;
}

std::string_view to_string(Metric m) { return m == Metric::Cosine ? "cosine" : "euclidean"; }

Metric metric_from_string(std::string_view s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "cosine") return Metric::Cosine;
  throw ValidationError("unknown metric '" + std::string(s) + "'");
}

EmbeddingIndex build_index(const LayoutNet& net, const std::vector<Gui>& guis, const std::vector<std::string>& ids,
                           Metric metric, const ExtractionConfig& ext) {
  if (guis.size() != ids.size()) throw ValidationError("index: one id per GUI required");
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size())
    throw ValidationError("index: duplicate ids");
  EmbeddingIndex idx;
  idx.metric = metric;
  idx.ids = ids;
  idx.vectors.resize(guis.size());
  const long n = static_cast<long>(guis.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      idx.vectors[static_cast<std::size_t>(i)] = gui_embedding(net, guis[static_cast<std::size_t>(i)], ext);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return idx;
}

double distance(Metric m, const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("distance: width mismatch");
  if (m == Metric::Euclidean) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return na == nb ? 0.0 : 1.0;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Neighbor> retrieve(const EmbeddingIndex& index, const std::vector<double>& query, std::size_t k,
                               const std::optional<std::string>& query_id) {
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (query_id ? index.ids[i] == *query_id : index.vectors[i] == query) continue;
    all.push_back({index.ids[i], distance(index.metric, index.vectors[i], query)});
  }
  if (k < 1 || k > all.size())
    throw ValidationError("retrieve: k must be in [1, " + std::to_string(all.size()) + "]");
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  all.resize(k);
  return all;
}

Checkpoint index_to_checkpoint(const EmbeddingIndex& index) {
  const std::size_t d = index.vectors.empty() ? 0 : index.vectors.front().size();
  Tensor t(index.size(), d);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index.vectors[i].size() != d) throw ShapeError("index: vectors differ in width");
    std::copy(index.vectors[i].begin(), index.vectors[i].end(), t.row_span(i).begin());
  }
  Checkpoint ck;
  ck.meta = {{"kind", "embedding_index"}, {"metric", std::string(to_string(index.metric))}, {"ids", index.ids}};
  ck.entries.emplace_back("embeddings", std::move(t));
  return ck;
}

EmbeddingIndex index_from_checkpoint(const Checkpoint& ck) {
  if (ck.meta.value("kind", std::string()) != "embedding_index") throw ParseError("index: not an embedding index");
  if (!ck.contains("embeddings")) throw ParseError("index: missing embeddings");
  EmbeddingIndex idx;
  try {
    idx.metric = metric_from_string(ck.meta.at("metric").get<std::string>());
    idx.ids = ck.meta.at("ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("index: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("index: ") + e.what());
  }
  const Tensor& t = ck.at("embeddings");
  if (t.rows() != idx.ids.size()) throw ParseError("index: id table and embeddings disagree");
  for (std::size_t i = 0; i < t.rows(); ++i) idx.vectors.push_back(t.row_vector(i));
  return idx;
}

}  // namespace lg
