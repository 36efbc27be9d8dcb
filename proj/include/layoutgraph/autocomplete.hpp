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

// Target placement: raw prediction, snapping refinement with confidence,
// and the single / group / all suggestion modes.
//
// Refinement of one raw box (x, y, w, h) against the partial graph:
//
//   base    Round; derive the minor dimension from the aspect ratio r using the
//           driving one (w when r >= 1, else h); shrink into the canvas; clamp
//           the position inside it.
//   High    Snap the size to the nearest same-size constraint (p >= threshold,
//           distance <= sigma), then x and y each to the nearest admissible
//           alignment line. High when the size and both axes snapped.
//   Medium  As High, except a missing size snap may come from a group's average
//           member size and a missing axis from continuing the group's run
//           (average gap along the run, median line across it). Only group
//           members of the target's kind count, and at least two are needed.
//   Low     The base box with whichever size and alignment snaps are in reach
//           on their own.
//
// Distance ties go to the driving dimension, then to the smaller constraint id.
// A snap is admissible only if the resulting box stays inside the canvas.
// refine() repeats this on its own output until the box stops changing (at
// most kRefinePasses times), which makes it idempotent.

#ifndef LAYOUTGRAPH_AUTOCOMPLETE_HPP_
#define LAYOUTGRAPH_AUTOCOMPLETE_HPP_

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "layoutgraph/extract.hpp"
#include "layoutgraph/model.hpp"
#include "layoutgraph/network.hpp"
#include "layoutgraph/objective.hpp"

namespace lg {

enum class Confidence { Low = 0, Medium = 1, High = 2 };
std::string_view to_string(Confidence c);
Confidence confidence_from_string(std::string_view s);

struct RefineConfig {
  double sigma = 20.0;
  double prob_threshold = 0.5;

  void validate() const;
};

inline constexpr int kRefinePasses = 8;

struct RefineResult {
  BBox bbox;
  Confidence confidence = Confidence::Low;
  // Constraints the box was snapped to (exactly satisfied by bbox).
  std::vector<std::string> satisfied;
  std::vector<std::string> trace;
  int passes = 0;
};

// Ratio-preserving base box. Throws ValidationError for a nonpositive ratio.
BBox base_box(const Box4& raw, double ratio, int canvas_w, int canvas_h);

// One refinement pass. probs[j] belongs to graph.constraints[j].
RefineResult refine_once(const Box4& raw, const std::vector<double>& probs, const LayoutGraph& graph,
                         const Element& target, const RefineConfig& cfg);
RefineResult refine(const Box4& raw, const std::vector<double>& probs, const LayoutGraph& graph,
                    const Element& target, const RefineConfig& cfg);

struct TargetPrediction {
  Box4 raw{};                  // pixels
  std::vector<double> probs;   // aligned with graph.constraints
  double mean_prob() const;
};

// Anything that turns (partial graph, unplaced target) into a raw box and
// per-constraint probabilities.
class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual std::vector<TargetPrediction> predict(const LayoutGraph& graph,
                                                const std::vector<const Element*>& targets) const = 0;
};

class NetTargetModel final : public TargetModel {
 public:
  explicit NetTargetModel(const LayoutNet& net) : net_(net) {}
  // The graph must have at least one element node.
  std::vector<TargetPrediction> predict(const LayoutGraph& graph,
                                        const std::vector<const Element*>& targets) const override;

 private:
  const LayoutNet& net_;
};

struct Suggestion {
  std::string element_id;
  BBox bbox;
  Confidence confidence = Confidence::Low;
  std::vector<std::pair<std::string, double>> constraints;
  std::vector<std::string> trace;
  Box4 raw{};
  double mean_prob = 0.0;
  bool cold_start = false;
};

nlohmann::json to_json(const Suggestion& s);

// Partial graph of the placed elements with freshly extracted constraints.
LayoutGraph partial_graph(const Gui& gui, const ExtractionConfig& ext = {});

// Low suggestion centred on the canvas with 10% of its area.
Suggestion cold_start_suggestion(const Gui& gui, const Element& target);

// Suggestion for each unplaced element, in GUI order.
std::vector<Suggestion> suggest_each(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                     const ExtractionConfig& ext = {});
// Suggestion for one named unplaced element. Throws NotFoundError.
Suggestion suggest_for(const Gui& gui, const std::string& element_id, const TargetModel& model,
                       const RefineConfig& cfg, const ExtractionConfig& ext = {});
// Highest confidence, then largest mean probability, then smallest id.
// Throws ValidationError when no element is unplaced.
Suggestion suggest_one(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                       const ExtractionConfig& ext = {});
std::vector<Suggestion> suggest_group(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                      const ExtractionConfig& ext = {});
std::vector<Suggestion> suggest_all(const Gui& gui, const TargetModel& model, const RefineConfig& cfg,
                                    const ExtractionConfig& ext = {});

// Places an unplaced element. Throws NotFoundError for an unknown id and
// ValidationError for a placed element or a box outside the canvas.
Gui accept(const Gui& gui, const std::string& element_id, const BBox& bbox);

bool inside_canvas(const BBox& b, int canvas_w, int canvas_h);

}  // namespace lg

#endif  // LAYOUTGRAPH_AUTOCOMPLETE_HPP_
