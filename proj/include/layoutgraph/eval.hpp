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

// Placement metrics, partial-GUI pair generation, fold assignment and the
// bucketed evaluation harness.

#ifndef LAYOUTGRAPH_EVAL_HPP_
#define LAYOUTGRAPH_EVAL_HPP_

#include <cstdint>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "layoutgraph/autocomplete.hpp"
#include "layoutgraph/extract.hpp"
#include "layoutgraph/model.hpp"

namespace lg {

// Distance between the top-left corners over the largest distance a box of
// the predicted size can travel on the canvas, capped at 1. When the
// predicted box fills the canvas the result is 0 for equal positions, else 1.
double pos_error(const BBox& pred, const BBox& truth, int canvas_w, int canvas_h);
double area_error(const BBox& pred, const BBox& truth);
// Share of the truth alignments the prediction misses (0 for an empty set).
double align_error(const BBox& pred, const std::vector<ConstraintNode>& truth, int tol);

struct PairSample {
  std::size_t gui = 0;   // index in the source dataset
  std::size_t draw = 0;  // targets of one draw share the partial
  Gui partial;           // placed elements only
  Element target;        // with its ground-truth box
};

enum class ChunkMode { Contiguous, Uniform };

// Elements sorted top-to-bottom, then left-to-right, then by id.
std::vector<std::size_t> reading_order(const Gui& gui);

// chunks draws; each keeps k in [1, n-1] elements and pairs the rest with
// that partial. Throws ValidationError for GUIs with fewer than 4 elements or
// with unplaced elements.
std::vector<PairSample> make_pairs(const Gui& gui, std::uint64_t seed, int chunks,
                                   ChunkMode mode = ChunkMode::Contiguous, std::size_t gui_index = 0);
std::vector<PairSample> make_dataset_pairs(const std::vector<Gui>& guis, std::uint64_t seed, int chunks,
                                           ChunkMode mode = ChunkMode::Contiguous);

std::string pairs_to_json(const std::vector<PairSample>& pairs);
std::vector<PairSample> pairs_from_json(std::string_view bytes);

struct FoldPlan {
  int k = 5;
  std::vector<int> assignments;  // item -> fold

  std::vector<std::size_t> fold(int f) const;
  std::vector<std::size_t> complement(int f) const;
};

// Seeded shuffle, then round-robin. Throws ValidationError for k < 2 or k > n.
FoldPlan kfold(std::size_t n, int k, std::uint64_t seed);

// Truth flag of every graph constraint for a target at its true box: 1 when
// extraction over partial + target finds a constraint of the same kind that
// contains the constraint's members and the target.
std::vector<double> truth_flags(const Gui& partial, const LayoutGraph& graph, const Element& target,
                                const ExtractionConfig& ext);
// Alignments the target takes part in, extracted over partial + target.
std::vector<ConstraintNode> truth_alignments(const Gui& partial, const Element& target,
                                             const ExtractionConfig& ext);

struct Placement {
  BBox bbox;
  Confidence confidence = Confidence::Low;
};

// Places the targets of one partial GUI. Targets carry their true boxes;
// only the oracles read them.
class Placer {
 public:
  virtual ~Placer() = default;
  virtual std::vector<Placement> place(const Gui& partial, const LayoutGraph& graph,
                                       const std::vector<Element>& targets) const = 0;
};

class ModelPlacer final : public Placer {
 public:
  ModelPlacer(const TargetModel& model, RefineConfig cfg) : model_(model), cfg_(cfg) {}
  std::vector<Placement> place(const Gui& partial, const LayoutGraph& graph,
                               const std::vector<Element>& targets) const override;

 private:
  const TargetModel& model_;
  RefineConfig cfg_;
};

// Upper bound: the model's raw box refined with the true constraint flags.
// The snapping distance is unbounded (a true constraint needs no proximity
// check), so only what the constraints leave open comes from the model.
class OracleConstraintPlacer final : public Placer {
 public:
  OracleConstraintPlacer(const TargetModel& model, ExtractionConfig ext) : model_(model), ext_(ext) {}
  std::vector<Placement> place(const Gui& partial, const LayoutGraph& graph,
                               const std::vector<Element>& targets) const override;

 private:
  const TargetModel& model_;
  ExtractionConfig ext_;
};

class OraclePlacer final : public Placer {
 public:
  std::vector<Placement> place(const Gui& partial, const LayoutGraph& graph,
                               const std::vector<Element>& targets) const override;
};

// Canvas centre, the target's aspect ratio, 10% of the canvas area.
class CenterPlacer final : public Placer {
 public:
  std::vector<Placement> place(const Gui& partial, const LayoutGraph& graph,
                               const std::vector<Element>& targets) const override;
};

struct MetricSums {
  std::size_t count = 0;
  double pos = 0.0, area = 0.0, align = 0.0;

  void add(double p, double a, double al);
  double pos_mean() const { return count ? pos / count : 0.0; }
  double area_mean() const { return count ? area / count : 0.0; }
  double align_mean() const { return count ? align / count : 0.0; }
};

struct MetricReport {
  MetricSums overall;
  std::map<std::size_t, MetricSums> buckets;  // by placed-element count of the partial
  std::map<Confidence, MetricSums> by_confidence;
  double mean_step_seconds = 0.0;
};

nlohmann::json to_json(const MetricReport& r);

// Pairs sharing (gui, draw) are placed together on one partial graph.
MetricReport evaluate(const Placer& placer, const std::vector<PairSample>& pairs, const ExtractionConfig& ext = {});

}  // namespace lg

#endif  // LAYOUTGRAPH_EVAL_HPP_
