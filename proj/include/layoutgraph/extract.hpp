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

// Constraint extraction from a fully placed layout.
//
// Alignment and same-size constraints come from single-linkage clustering of
// one coordinate (two values link when they differ by at most tol). The line
// or size value is the rounded median of the cluster; members further than
// tol from it are dropped, and clusters left with fewer than min_members are
// discarded.
//
// Element groups are maximal runs of same-kind elements stacked vertically
// (left edges clustered) or horizontally (top edges clustered) whose gaps are
// in [0, group_gap] and differ from each other by at most tol.
//
// Multimodal groups are tuples of 2 to 4 adjacent elements with at least two
// distinct kinds, laid out along a row or a column, whose kind sequence and
// relative geometry recur at least min_members times. Each recurrence becomes
// one constraint node.
//
// All outputs are sorted by canonical id and independent of element order.

#ifndef LAYOUTGRAPH_EXTRACT_HPP_
#define LAYOUTGRAPH_EXTRACT_HPP_

#include <vector>

#include "layoutgraph/model.hpp"

namespace lg {

struct ExtractionConfig {
  int tol = 2;
  int group_gap = 32;
  int min_members = 2;

  void validate() const;
};

inline constexpr int kMaxTupleLength = 4;

std::vector<ConstraintNode> extract_alignments(const Gui& gui, const ExtractionConfig& cfg = {});
std::vector<ConstraintNode> extract_same_size(const Gui& gui, const ExtractionConfig& cfg = {});
std::vector<ConstraintNode> extract_groups(const Gui& gui, const ExtractionConfig& cfg = {});
std::vector<ConstraintNode> extract_multimodal_groups(const Gui& gui,
                                                      const ExtractionConfig& cfg = {});
std::vector<ConstraintNode> extract_all(const Gui& gui, const ExtractionConfig& cfg = {});

// Same as extract_all but skips unplaced elements instead of rejecting them.
std::vector<ConstraintNode> extract_placed(const Gui& gui, const ExtractionConfig& cfg = {});

}  // namespace lg

#endif  // LAYOUTGRAPH_EXTRACT_HPP_
