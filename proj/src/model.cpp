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

#include "layoutgraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "layoutgraph/error.hpp"

namespace lg {

using nlohmann::json;

Vocabulary::Vocabulary(std::vector<std::string> kinds) : kinds_(std::move(kinds)) {
  std::set<std::string> seen;
  for (const auto& k : kinds_) {
    if (k.empty()) throw ValidationError("vocabulary: empty kind name");
    if (!seen.insert(k).second) throw ValidationError("vocabulary: duplicate kind " + k);
  }
  if (kinds_.empty()) throw ValidationError("vocabulary: no kinds");
}

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab({"Text", "Image", "Icon", "Button", "TextField", "Checkbox",
                                 "RadioButton", "Switch", "Slider", "ListItem", "Card", "Toolbar",
                                 "NavBar", "Tab", "Ad", "Map", "WebView", "Background"});
  return vocab;
}

Vocabulary Vocabulary::from_json(std::string_view bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("vocabulary: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("vocabulary: expected a JSON array of kind names");
  std::vector<std::string> kinds;
  for (const auto& k : doc) {
    if (!k.is_string()) throw ValidationError("vocabulary: kind names must be strings");
    kinds.push_back(k.get<std::string>());
  }
  return Vocabulary(std::move(kinds));
}

bool Vocabulary::contains(std::string_view kind) const {
  return std::find(kinds_.begin(), kinds_.end(), kind) != kinds_.end();
}

std::size_t Vocabulary::index_of(std::string_view kind) const {
  auto it = std::find(kinds_.begin(), kinds_.end(), kind);
  if (it == kinds_.end()) throw ValidationError("unknown element kind '" + std::string(kind) + "'");
  return static_cast<std::size_t>(it - kinds_.begin());
}

const Element* Gui::find(std::string_view id) const {
  for (const auto& e : elements)
    if (e.id == id) return &e;
  return nullptr;
}

std::size_t Gui::placed_count() const {
  return static_cast<std::size_t>(
      std::count_if(elements.begin(), elements.end(), [](const Element& e) { return e.placed(); }));
}

void validate(const Gui& gui, const Vocabulary& vocab) {
  if (gui.canvas_w < 1 || gui.canvas_h < 1) throw ValidationError("canvas dimensions must be >= 1");
  std::set<std::string_view> ids;
  for (const auto& e : gui.elements) {
    if (e.id.empty()) throw ValidationError("element id must be non-empty");
    if (!ids.insert(e.id).second) throw ValidationError("duplicate element id '" + e.id + "'");
    if (!vocab.contains(e.kind))
      throw ValidationError("element '" + e.id + "': unknown kind '" + e.kind + "'");
    if (!(e.aspect_ratio > 0.0) || !std::isfinite(e.aspect_ratio))
      throw ValidationError("element '" + e.id + "': aspect_ratio must be positive");
    if (e.bbox) {
      const BBox& b = *e.bbox;
      if (b.w < 1 || b.h < 1) throw ValidationError("element '" + e.id + "': nonpositive size");
      // Declared ratio must reproduce the box within one pixel of rounding.
      if (!ratio_matches(b, e.aspect_ratio))
        throw ValidationError("element '" + e.id + "': aspect_ratio inconsistent with bbox");
    }
    if (e.appearance)
      for (double v : *e.appearance)
        if (!std::isfinite(v)) throw ValidationError("element '" + e.id + "': non-finite appearance");
  }
}

namespace {

int get_int(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing '" + key + "'");
  if (!it->is_number_integer()) throw ValidationError(where + ": '" + key + "' must be an integer");
  return it->get<int>();
}

json parse_doc(std::string_view bytes, const char* what) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Element element_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("element must be an object");
  Element e;
  if (!j.contains("id") || !j["id"].is_string()) throw ValidationError("element: missing string 'id'");
  e.id = j["id"].get<std::string>();
  const std::string where = "element '" + e.id + "'";
  if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError(where + ": missing 'kind'");
  e.kind = j["kind"].get<std::string>();
  if (auto it = j.find("bbox"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError(where + ": bbox must be an object");
    e.bbox = BBox{get_int(*it, "x", where), get_int(*it, "y", where), get_int(*it, "w", where),
                  get_int(*it, "h", where)};
    if (e.bbox->w < 1 || e.bbox->h < 1) throw ValidationError(where + ": nonpositive size");
  }
  if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError(where + ": text must be a string");
    e.text = it->get<std::string>();
  }
  if (auto it = j.find("appearance"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError(where + ": appearance must be an array");
    std::vector<double> v;
    for (const auto& x : *it) {
      if (!x.is_number()) throw ValidationError(where + ": appearance entries must be numbers");
      v.push_back(x.get<double>());
    }
    e.appearance = std::move(v);
  }
  if (auto it = j.find("aspect_ratio"); it != j.end() && !it->is_null()) {
    if (!it->is_number()) throw ValidationError(where + ": aspect_ratio must be a number");
    e.aspect_ratio = it->get<double>();
  } else if (e.bbox) {
    e.aspect_ratio = static_cast<double>(e.bbox->w) / e.bbox->h;
  } else {
    throw ValidationError(where + ": unplaced element requires aspect_ratio");
  }
  return e;
}

json element_to_json(const Element& e) {
  json j;
  j["id"] = e.id;
  j["kind"] = e.kind;
  if (e.bbox) j["bbox"] = {{"x", e.bbox->x}, {"y", e.bbox->y}, {"w", e.bbox->w}, {"h", e.bbox->h}};
  if (e.text) j["text"] = *e.text;
  if (e.appearance) j["appearance"] = *e.appearance;
  j["aspect_ratio"] = e.aspect_ratio;
  return j;
}

Gui gui_from_json(std::string_view bytes, const Vocabulary& vocab) {
  const json doc = parse_doc(bytes, "gui");
  if (!doc.is_object()) throw ValidationError("gui: top level must be an object");
  auto canvas = doc.find("canvas");
  if (canvas == doc.end() || !canvas->is_object()) throw ValidationError("gui: missing 'canvas'");
  Gui gui;
  gui.canvas_w = get_int(*canvas, "w", "canvas");
  gui.canvas_h = get_int(*canvas, "h", "canvas");
  if (auto it = doc.find("topic"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("gui: topic must be a string");
    gui.topic = it->get<std::string>();
  }
  if (auto it = doc.find("elements"); it != doc.end()) {
    if (!it->is_array()) throw ValidationError("gui: elements must be an array");
    for (const auto& ej : *it) gui.elements.push_back(element_from_json(ej));
  }
  validate(gui, vocab);
  return gui;
}

std::string gui_to_json(const Gui& gui) {
  json doc;
  doc["canvas"] = {{"w", gui.canvas_w}, {"h", gui.canvas_h}};
  if (gui.topic) doc["topic"] = *gui.topic;
  if (!gui.elements.empty()) {
    json arr = json::array();
    for (const auto& e : gui.elements) arr.push_back(element_to_json(e));
    doc["elements"] = std::move(arr);
  }
  return doc.dump();
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Alignment: return "alignment";
    case ConstraintKind::SameSize: return "same_size";
    case ConstraintKind::ElementGroup: return "element_group";
    case ConstraintKind::MultimodalGroup: return "multimodal_group";
  }
  return "?";
}

std::string_view to_string(AlignKind kind) {
  switch (kind) {
    case AlignKind::Left: return "left";
    case AlignKind::Top: return "top";
    case AlignKind::Right: return "right";
    case AlignKind::Bottom: return "bottom";
    case AlignKind::VMid: return "vmid";
    case AlignKind::HMid: return "hmid";
  }
  return "?";
}

std::string_view to_string(SizeKind kind) { return kind == SizeKind::Width ? "width" : "height"; }

ConstraintKind constraint_kind_from_string(std::string_view s) {
  for (auto k : {ConstraintKind::Alignment, ConstraintKind::SameSize, ConstraintKind::ElementGroup,
                 ConstraintKind::MultimodalGroup})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown constraint kind '" + std::string(s) + "'");
}

AlignKind align_kind_from_string(std::string_view s) {
  for (auto k : kAllAlignKinds)
    if (to_string(k) == s) return k;
  throw ValidationError("unknown align kind '" + std::string(s) + "'");
}

SizeKind size_kind_from_string(std::string_view s) {
  if (s == "width") return SizeKind::Width;
  if (s == "height") return SizeKind::Height;
  throw ValidationError("unknown size kind '" + std::string(s) + "'");
}

bool is_vertical_line(AlignKind kind) {
  return kind == AlignKind::Left || kind == AlignKind::Right || kind == AlignKind::VMid;
}

int align_coord(const BBox& b, AlignKind kind) {
  switch (kind) {
    case AlignKind::Left: return b.x;
    case AlignKind::Top: return b.y;
    case AlignKind::Right: return b.x + b.w;
    case AlignKind::Bottom: return b.y + b.h;
    case AlignKind::VMid: return b.x + b.w / 2;
    case AlignKind::HMid: return b.y + b.h / 2;
  }
  return 0;
}

int size_of(const BBox& b, SizeKind kind) { return kind == SizeKind::Width ? b.w : b.h; }

bool ratio_matches(const BBox& box, double ratio) {
  return std::abs(ratio * box.h - box.w) <= 1.0 + 1e-9 || std::abs(box.w / ratio - box.h) <= 1.0 + 1e-9;
}

std::vector<double> ConstraintNode::attr() const {
  switch (kind) {
    case ConstraintKind::Alignment: {
      std::vector<double> v(kAlignAttrDim, 0.0);
      v[static_cast<std::size_t>(align)] = 1.0;
      v[is_vertical_line(align) ? 6 : 7] = line;
      return v;
    }
    case ConstraintKind::SameSize:
      return size_kind == SizeKind::Width ? std::vector<double>{double(size_value), 0.0}
                                          : std::vector<double>{0.0, double(size_value)};
    default:
      return std::vector<double>(kGroupSlotDim, 0.0);
  }
}

bool ConstraintNode::satisfied_by(const BBox& box, int tol) const {
  switch (kind) {
    case ConstraintKind::Alignment: return std::abs(align_coord(box, align) - line) <= tol;
    case ConstraintKind::SameSize: return std::abs(size_of(box, size_kind) - size_value) <= tol;
    default: return true;
  }
}

std::string canonical_constraint_id(const ConstraintNode& c) {
  std::vector<std::string> m = c.members;
  std::sort(m.begin(), m.end());
  std::string id;
  switch (c.kind) {
    case ConstraintKind::Alignment: id = "align-" + std::string(to_string(c.align)); break;
    case ConstraintKind::SameSize: id = "size-" + std::string(to_string(c.size_kind)); break;
    case ConstraintKind::ElementGroup: id = "group"; break;
    case ConstraintKind::MultimodalGroup: id = "mgroup"; break;
  }
  id += ':';
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) id += ',';
    id += m[i];
  }
  return id;
}

std::vector<ConstraintNode> constraints_from_json(std::string_view bytes) {
  const json doc = parse_doc(bytes, "constraints");
  if (!doc.is_array()) throw ValidationError("constraints: expected an array");
  std::vector<ConstraintNode> out;
  std::set<std::string> ids;
  for (const auto& j : doc) {
    if (!j.is_object()) throw ValidationError("constraint must be an object");
    ConstraintNode c;
    if (!j.contains("id") || !j["id"].is_string()) throw ValidationError("constraint: missing 'id'");
    c.id = j["id"].get<std::string>();
    const std::string where = "constraint '" + c.id + "'";
    if (!ids.insert(c.id).second) throw ValidationError(where + ": duplicate id");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ValidationError(where + ": missing kind");
    c.kind = constraint_kind_from_string(j["kind"].get<std::string>());
    if (c.kind == ConstraintKind::Alignment) {
      if (!j.contains("align_kind") || !j["align_kind"].is_string())
        throw ValidationError(where + ": missing align_kind");
      c.align = align_kind_from_string(j["align_kind"].get<std::string>());
      c.line = get_int(j, "line", where);
    } else if (c.kind == ConstraintKind::SameSize) {
      if (!j.contains("size_kind") || !j["size_kind"].is_string())
        throw ValidationError(where + ": missing size_kind");
      c.size_kind = size_kind_from_string(j["size_kind"].get<std::string>());
      c.size_value = get_int(j, "size_value", where);
    }
    if (!j.contains("members") || !j["members"].is_array())
      throw ValidationError(where + ": missing members");
    for (const auto& m : j["members"]) {
      if (!m.is_string()) throw ValidationError(where + ": member ids must be strings");
      c.members.push_back(m.get<std::string>());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string constraints_to_json(const std::vector<ConstraintNode>& constraints) {
  json arr = json::array();
  for (const auto& c : constraints) {
    json j;
    j["id"] = c.id;
    j["kind"] = std::string(to_string(c.kind));
    if (c.kind == ConstraintKind::Alignment) {
      j["align_kind"] = std::string(to_string(c.align));
      j["line"] = c.line;
    } else if (c.kind == ConstraintKind::SameSize) {
      j["size_kind"] = std::string(to_string(c.size_kind));
      j["size_value"] = c.size_value;
    }
    j["members"] = c.members;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

LayoutGraph build_graph(const Gui& gui, const std::vector<ConstraintNode>& constraints) {
  LayoutGraph g;
  g.canvas_w = gui.canvas_w;
  g.canvas_h = gui.canvas_h;
  std::unordered_map<std::string_view, std::size_t> node_of;
  std::unordered_map<std::string_view, bool> known;
  for (const auto& e : gui.elements) {
    known[e.id] = e.placed();
    if (!e.placed()) continue;
    node_of[e.id] = g.elements.size();
    g.elements.push_back(e);
  }
  std::vector<std::vector<std::size_t>> member_nodes;
  for (const auto& c : constraints) {
    std::vector<std::size_t> nodes;
    for (const auto& m : c.members) {
      auto k = known.find(m);
      if (k == known.end())
        throw ValidationError("constraint '" + c.id + "' references unknown element '" + m + "'");
      if (!k->second)
        throw ValidationError("constraint '" + c.id + "' references unplaced element '" + m + "'");
      nodes.push_back(node_of.at(m));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    if (nodes.size() < 2) continue;
    g.constraints.push_back(c);
    member_nodes.push_back(std::move(nodes));
  }
  const std::size_t m = g.elements.size(), n = g.constraints.size();
  g.adjacency.assign(m * n, 0);
  g.element_neighbors.assign(m, {});
  g.constraint_neighbors.assign(n, {});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i : member_nodes[j]) {
      g.adjacency[i * n + j] = 1;
      g.element_neighbors[i].push_back(j);
    }
    g.constraint_neighbors[j] = member_nodes[j];
  }
  return g;
}

}  // namespace lg
