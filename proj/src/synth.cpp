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

#include "layoutgraph/synth.hpp"

#include <algorithm>
#include <string>

#include "layoutgraph/error.hpp"

namespace lg {

namespace {

int pick(Rng& rng, int lo, int hi) { return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1))); }

const char* word(Rng& rng, std::initializer_list<const char*> words) {
  return *(words.begin() + rng.below(words.size()));
}

class Builder {
 public:
  Builder(const SynthConfig& cfg, std::size_t topic) {
    gui_.canvas_w = cfg.canvas_w;
    gui_.canvas_h = cfg.canvas_h;
    gui_.topic = std::string(kSynthTopics[topic]);
  }

  void add(const char* kind, int x, int y, int w, int h, const char* text = nullptr) {
    Element e;
    e.id = "e" + std::to_string(gui_.elements.size());
    e.kind = kind;
    e.bbox = BBox{x, y, w, h};
    e.aspect_ratio = static_cast<double>(w) / h;
    if (text) e.text = text;
    gui_.elements.push_back(std::move(e));
  }

  int W() const { return gui_.canvas_w; }
  int H() const { return gui_.canvas_h; }
  Gui take() { return std::move(gui_); }

 private:
  Gui gui_;
};

// Toolbar across the top with a title; returns its height.
int toolbar(Builder& b, Rng& rng, int margin, const char* title) {
  const int th = pick(rng, 48, 64);
  b.add("Toolbar", 0, 0, b.W(), th);
  b.add("Text", margin, (th - 20) / 2, pick(rng, 80, 160), 20, title);
  return th;
}

void news_feed(Builder& b, Rng& rng) {
  const int m = pick(rng, 8, 24);
  const int top = toolbar(b, rng, m, "News");
  const int h = pick(rng, 80, 120), gap = pick(rng, 8, 16), tw = pick(rng, 120, 240);
  const int fit = (b.H() - top - gap) / (h + gap);
  const int n = std::min(pick(rng, 3, 6), fit);
  for (int i = 0; i < n; ++i) {
    const int y = top + gap + i * (h + gap);
    b.add("Card", m, y, b.W() - 2 * m, h);
    b.add("Text", m + 8, y + 8, tw, 20, word(rng, {"breaking story", "local report", "weather today", "sports"}));
  }
}

void gallery(Builder& b, Rng& rng) {
  const int m = pick(rng, 8, 24);
  const int top = toolbar(b, rng, m, "Photos");
  const int cols = pick(rng, 2, 4), gap = pick(rng, 4, 12);
  const int cw = (b.W() - 2 * m - (cols - 1) * gap) / cols;
  const int ch = cw * pick(rng, 3, 5) / 4;
  const int fit = (b.H() - top - gap) / (ch + gap);
  const int rows = std::min(pick(rng, 2, 5), fit);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) b.add("Image", m + c * (cw + gap), top + gap + r * (ch + gap), cw, ch);
}

void login(Builder& b, Rng& rng) {
  const int s = pick(rng, 64, 120);
  int y = pick(rng, 60, 120);
  b.add("Image", (b.W() - s) / 2, y, s, s);
  y += s + pick(rng, 24, 48);
  const int m = pick(rng, 24, 48), fh = pick(rng, 40, 52), gap = pick(rng, 12, 20);
  const int fw = b.W() - 2 * m;
  const int k = pick(rng, 2, 3);
  static const char* labels[] = {"username", "password", "email"};
  for (int i = 0; i < k; ++i, y += fh + gap) b.add("TextField", m, y, fw, fh, labels[i]);
  const int bh = pick(rng, 44, 56);
  b.add("Button", m, y + 8, fw, bh, "sign in");
  const int lw = pick(rng, 100, 160);
  b.add("Text", (b.W() - lw) / 2, y + 8 + bh + 16, lw, 20, "forgot password");
}

void settings(Builder& b, Rng& rng) {
  const int m = pick(rng, 8, 24);
  const int top = toolbar(b, rng, m, "Settings");
  const int rh = pick(rng, 40, 52), tw = pick(rng, 120, 200), sw = pick(rng, 40, 52);
  const int fit = (b.H() - top - 16) / rh;
  const int n = std::min(pick(rng, 4, 8), fit);
  for (int i = 0; i < n; ++i) {
    const int y = top + 16 + i * rh;
    b.add("Text", m, y + (rh - 20) / 2, tw, 20,
          word(rng, {"notifications", "dark mode", "wifi", "bluetooth", "location", "sync"}));
    b.add("Switch", b.W() - m - sw, y + (rh - 24) / 2, sw, 24);
  }
}

void chat(Builder& b, Rng& rng) {
  const int m = pick(rng, 8, 16);
  const int top = toolbar(b, rng, m, "Chat");
  const int a = pick(rng, 32, 40), gap = pick(rng, 12, 24);
  const int bottom = b.H() - m - 44;
  const int fit = (bottom - top - gap) / (a + gap);
  const int n = std::min(pick(rng, 4, 7), fit);
  for (int i = 0; i < n; ++i) {
    const int y = top + gap + i * (a + gap);
    b.add("Icon", m, y, a, a);
    b.add("Text", m + a + 8, y + (a - 20) / 2, pick(rng, 80, b.W() - 2 * m - a - 16), 20,
          word(rng, {"hello there", "see you soon", "ok", "on my way", "thanks"}));
  }
  b.add("TextField", m, bottom, b.W() - 2 * m - 52, 44, "message");
  b.add("Icon", b.W() - m - 44, bottom, 44, 44);
}

void media_player(Builder& b, Rng& rng) {
  const int m = pick(rng, 16, 32);
  int y = pick(rng, 48, 96);
  const int art = b.W() - 2 * m;
  b.add("Image", m, y, art, art);
  y += art + 16;
  b.add("Text", m, y, pick(rng, 160, 260), 24, word(rng, {"song title", "track one", "live session"}));
  y += 24 + 8;
  b.add("Text", m, y, pick(rng, 100, 200), 20, word(rng, {"artist", "band name", "various"}));
  y += 20 + 16;
  b.add("Slider", m, y, art, 20);
  y += 20 + 16;
  const int k = pick(rng, 3, 5), s = pick(rng, 40, 56);
  const int gap = std::min(pick(rng, 16, 32), (b.W() - 2 * m - k * s) / (k - 1));
  const int total = k * s + (k - 1) * gap;
  const int x0 = (b.W() - total) / 2;
  for (int i = 0; i < k; ++i) b.add("Button", x0 + i * (s + gap), std::min(y, b.H() - s - 8), s, s);
}

void maps(Builder& b, Rng& rng) {
  const int nb = pick(rng, 56, 72);
  b.add("Map", 0, 0, b.W(), b.H() - nb);
  b.add("NavBar", 0, b.H() - nb, b.W(), nb);
  const int k = pick(rng, 3, 5);
  const int tw = b.W() / k;
  for (int i = 0; i < k; ++i) b.add("Tab", i * tw, b.H() - nb, tw, nb);
  const int m = pick(rng, 12, 24), s = pick(rng, 44, 56);
  b.add("Button", b.W() - m - s, b.H() - nb - m - s, s, s);
  b.add("TextField", m, m, b.W() - 2 * m, pick(rng, 40, 48), "search");
}

void shopping(Builder& b, Rng& rng) {
  const int m = pick(rng, 8, 20);
  const int top = toolbar(b, rng, m, "Shop");
  const int gap = pick(rng, 8, 16);
  const int cw = (b.W() - 2 * m - gap) / 2;
  const int ih = cw * pick(rng, 3, 4) / 4;
  const int pw = pick(rng, 48, 80);
  const int cell = ih + 48;
  const int fit = (b.H() - top - gap) / (cell + gap);
  const int rows = std::min(pick(rng, 2, 3), fit);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < 2; ++c) {
      const int x = m + c * (cw + gap), y = top + gap + r * (cell + gap);
      b.add("Image", x, y, cw, ih);
      b.add("Text", x, y + ih + 4, cw, 20, word(rng, {"shoes", "jacket", "lamp", "watch", "bag"}));
      b.add("Text", x, y + ih + 28, pw, 20, "price");
    }
  }
}

}  // namespace

void SynthConfig::validate() const {
  if (canvas_w < 320 || canvas_h < 560) throw ValidationError("synth: canvas must be at least 320x560");
}

Gui synth_gui(Rng& rng, std::size_t topic, const SynthConfig& cfg) {
  cfg.validate();
  if (topic >= kSynthTopics.size()) throw ValidationError("synth: unknown template " + std::to_string(topic));
  Builder b(cfg, topic);
  switch (topic) {
    case 0: news_feed(b, rng); break;
    case 1: gallery(b, rng); break;
    case 2: login(b, rng); break;
    case 3: settings(b, rng); break;
    case 4: chat(b, rng); break;
    case 5: media_player(b, rng); break;
    case 6: maps(b, rng); break;
    default: shopping(b, rng); break;
  }
  return b.take();
}

std::vector<Gui> gen_synthetic(std::uint64_t seed, int count, const SynthConfig& cfg) {
  if (count < 1) throw ValidationError("synth: count must be >= 1");
  Rng rng(seed);
  std::vector<Gui> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(synth_gui(rng, static_cast<std::size_t>(i) % kSynthTopics.size(), cfg));
  return out;
}

Gui jitter(const Gui& gui, Rng& rng, int px) {
  Gui out = gui;
  for (Element& e : out.elements) {
    if (!e.bbox) continue;
    BBox& b = *e.bbox;
    b.x = std::clamp(b.x + pick(rng, -px, px), 0, out.canvas_w - b.w);
    b.y = std::clamp(b.y + pick(rng, -px, px), 0, out.canvas_h - b.h);
  }
  return out;
}

}  // namespace lg
