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

// Synthetic GUI corpus: eight template families, one topic each, with
// randomised counts, sizes, margins and gaps. Every template is built from
// columns, rows and grids with exact integer spacing, so the constraints it
// contains are known by construction.

#ifndef LAYOUTGRAPH_SYNTH_HPP_
#define LAYOUTGRAPH_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/model.hpp"

namespace lg {

inline constexpr std::array<std::string_view, 8> kSynthTopics = {
    "news_feed", "gallery", "login", "settings", "chat", "media_player", "maps", "shopping"};

struct SynthConfig {
  int canvas_w = 360;
  int canvas_h = 640;

  void validate() const;
};

// One GUI of the given template (index into kSynthTopics).
Gui synth_gui(Rng& rng, std::size_t topic, const SynthConfig& cfg = {});

// count GUIs cycling through the templates in order. Throws ValidationError
// for count < 1.
std::vector<Gui> gen_synthetic(std::uint64_t seed, int count, const SynthConfig& cfg = {});

// Moves every placed box by up to px pixels per axis, staying on the canvas.
Gui jitter(const Gui& gui, Rng& rng, int px);

}  // namespace lg

#endif  // LAYOUTGRAPH_SYNTH_HPP_
