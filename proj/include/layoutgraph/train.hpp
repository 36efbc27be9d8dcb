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

// Training loops for the autocompletion and topic-classification tasks.
//
// Autocompletion samples are partial-GUI draws: the kept chunk becomes the
// graph, every removed element a target. One draw contributes
//   total_loss(targets) + recon_weight * mse(reconstruction of kept elements)
// in canvas-normalised units. Classification samples are complete GUIs plus
// one partial draw each, trained on cross-entropy alone.
//
// A step evaluates each sample of the minibatch on its own tape (in parallel)
// and sums the per-sample gradients in sample order, so a run is
// bit-reproducible for a given seed whatever the thread count.

#ifndef LAYOUTGRAPH_TRAIN_HPP_
#define LAYOUTGRAPH_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "layoutgraph/extract.hpp"
#include "layoutgraph/model.hpp"
#include "layoutgraph/network.hpp"
#include "layoutgraph/objective.hpp"
#include "layoutgraph/optim.hpp"

namespace lg {

enum class TrainTask { Autocomplete, Classify };
std::string_view to_string(TrainTask t);
TrainTask train_task_from_string(std::string_view s);

struct TrainConfig {
  TrainTask task = TrainTask::Autocomplete;
  int epochs = 10;
  std::uint64_t seed = 1;
  int batch = 16;
  int chunks_per_gui = 30;
  double recon_weight = 1.0;
  LossWeights weights;
  AdamConfig adam;
  ExtractionConfig ext;

  void validate() const;
};

struct TrainResult {
  std::size_t steps = 0;
  LossReport last_epoch;  // mean over the final epoch's samples
};

using StepCallback = std::function<void(std::size_t step, const LossReport& batch_mean)>;

// Trains net in place. Throws ValidationError for an empty corpus or, for the
// classification task, GUIs without a known topic.
TrainResult train(LayoutNet& net, const std::vector<Gui>& guis, const TrainConfig& cfg,
                  const StepCallback& on_step = {});

// Text-frequency statistics over a corpus.
CorpusStats corpus_stats(const std::vector<Gui>& guis);
// Hex FNV-1a digest of the canonical JSON of every GUI, in order.
std::string corpus_hash(const std::vector<Gui>& guis);
// base with max_coord fitted to the largest canvas and the sorted topic set.
NetConfig net_config_for(const std::vector<Gui>& guis, NetConfig base);

// Seeded split into (train, held-out) index lists, held-out share = frac.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double frac,
                                                                            std::uint64_t seed);

}  // namespace lg

#endif  // LAYOUTGRAPH_TRAIN_HPP_
