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

// Value types for GUI layouts: elements, canvases, constraint nodes and the
// bipartite element/constraint graph. Coordinates are integer pixels with the
// origin at the top-left corner and y growing downward.

#ifndef LAYOUTGRAPH_MODEL_HPP_
#define LAYOUTGRAPH_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lg {

struct BBox {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool operator==(const BBox&) const = default;
};

// Element-type vocabulary. Kinds are matched by exact string.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> kinds);

  // The 18-entry default vocabulary.
  static const Vocabulary& standard();
  // JSON array of kind names.
  static Vocabulary from_json(std::string_view bytes);

  std::size_t size() const { return kinds_.size(); }
  const std::vector<std::string>& kinds() const { return kinds_; }
  bool contains(std::string_view kind) const;
  // Throws ValidationError for unknown kinds.
  std::size_t index_of(std::string_view kind) const;

 private:
  std::vector<std::string> kinds_;
};

struct Element {
  std::string id;
  std::string kind;
  std::optional<BBox> bbox;  // absent = unplaced
  std::optional<std::string> text;
  std::optional<std::vector<double>> appearance;
  double aspect_ratio = 1.0;  // w / h

  bool placed() const { return bbox.has_value(); }
  bool operator==(const Element&) const = default;
};

struct Gui {
  int canvas_w = 1;
  int canvas_h = 1;
  std::optional<std::string> topic;
  std::vector<Element> elements;

  const Element* find(std::string_view id) const;
  std::size_t placed_count() const;
  bool operator==(const Gui&) const = default;
};

// True when w/h reproduces the box within one pixel on either dimension.
bool ratio_matches(const BBox& box, double ratio);

// Checks every Gui invariant; throws ValidationError on the first violation.
void validate(const Gui& gui, const Vocabulary& vocab = Vocabulary::standard());

// Parse / emit the GUI JSON document. Emission is canonical: sorted keys and
// no insignificant whitespace, so equal GUIs always produce equal bytes.
Gui gui_from_json(std::string_view bytes, const Vocabulary& vocab = Vocabulary::standard());
std::string gui_to_json(const Gui& gui);
// One element object of the GUI document. Throws ValidationError.
Element element_from_json(const nlohmann::json& j);
nlohmann::json element_to_json(const Element& e);

enum class ConstraintKind { Alignment, SameSize, ElementGroup, MultimodalGroup };
enum class AlignKind { Left, Top, Right, Bottom, VMid, HMid };
enum class SizeKind { Width, Height };

inline constexpr std::size_t kAlignAttrDim = 8;
inline constexpr std::size_t kSizeAttrDim = 2;
inline constexpr std::size_t kGroupSlotDim = 8;
inline constexpr AlignKind kAllAlignKinds[] = {AlignKind::Left,   AlignKind::Top,  AlignKind::Right,
                                               AlignKind::Bottom, AlignKind::VMid, AlignKind::HMid};

std::string_view to_string(ConstraintKind kind);
std::string_view to_string(AlignKind kind);
std::string_view to_string(SizeKind kind);
ConstraintKind constraint_kind_from_string(std::string_view s);
AlignKind align_kind_from_string(std::string_view s);
SizeKind size_kind_from_string(std::string_view s);

// Left, Right and VMid lines are vertical (x = a); the rest are horizontal.
bool is_vertical_line(AlignKind kind);
// The coordinate an alignment of this kind compares. Midlines use integer
// division so that x + w/2 is always an attainable integer.
int align_coord(const BBox& box, AlignKind kind);
int size_of(const BBox& box, SizeKind kind);

struct ConstraintNode {
  std::string id;
  ConstraintKind kind = ConstraintKind::Alignment;
  AlignKind align = AlignKind::Left;     // Alignment only
  int line = 0;                          // Alignment only
  SizeKind size_kind = SizeKind::Width;  // SameSize only
  int size_value = 0;                    // SameSize only
  std::vector<std::string> members;

  bool is_group() const {
    return kind == ConstraintKind::ElementGroup || kind == ConstraintKind::MultimodalGroup;
  }
  // Raw attribute vector in pixels: 6 one-hot + [a,0]/[0,b] for alignments,
  // [w,0]/[0,h] for same-size, and a zero slot of kGroupSlotDim for groups.
  std::vector<double> attr() const;
  // Geometric check of one member box against this constraint (groups: true).
  bool satisfied_by(const BBox& box, int tol) const;
  bool operator==(const ConstraintNode&) const = default;
};

// Deterministic id from (kind, sub-kind, sorted member ids).
std::string canonical_constraint_id(const ConstraintNode& c);

std::vector<ConstraintNode> constraints_from_json(std::string_view bytes);
std::string constraints_to_json(const std::vector<ConstraintNode>& constraints);

// Heterogeneous bipartite graph over the placed elements of a GUI and the
// constraint nodes relating them. a(i, j) = 1 iff element i is a member of
// constraint j.
struct LayoutGraph {
  int canvas_w = 1;
  int canvas_h = 1;
  std::vector<Element> elements;
  std::vector<ConstraintNode> constraints;
  std::vector<std::uint8_t> adjacency;  // elements.size() x constraints.size(), row-major
  std::vector<std::vector<std::size_t>> element_neighbors;     // constraint indices
  std::vector<std::vector<std::size_t>> constraint_neighbors;  // element indices

  std::size_t element_count() const { return elements.size(); }
  std::size_t constraint_count() const { return constraints.size(); }
  bool adjacent(std::size_t element, std::size_t constraint) const {
    return adjacency[element * constraints.size() + constraint] != 0;
  }
};

// Element nodes are the placed elements in GUI order. Constraints with fewer
// than two members are dropped. Throws ValidationError when a constraint names
// an unknown or unplaced element.
LayoutGraph build_graph(const Gui& gui, const std::vector<ConstraintNode>& constraints);

}  // namespace lg

#endif  // LAYOUTGRAPH_MODEL_HPP_
