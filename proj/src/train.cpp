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

#include "layoutgraph/train.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <numeric>
#include <set>

#include "layoutgraph/error.hpp"
#include "layoutgraph/eval.hpp"

namespace lg {

std::string_view to_string(TrainTask t) { return t == TrainTask::Classify ? "classify" : "autocomplete"; }

TrainTask train_task_from_string(std::string_view s) {
  if (s == "autocomplete") return TrainTask::Autocomplete;
  if (s == "classify") return TrainTask::Classify;
  throw ValidationError("unknown task '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 0) throw ValidationError("train: epochs must be >= 0");
  if (batch < 1) throw ValidationError("train: batch must be >= 1");
  if (chunks_per_gui < 1) throw ValidationError("train: chunks_per_gui must be >= 1");
  if (!(recon_weight >= 0.0)) throw ValidationError("train: recon_weight must be >= 0");
  weights.validate();
  adam.validate();
  ext.validate();
}

CorpusStats corpus_stats(const std::vector<Gui>& guis) {
  CorpusStats s;
  for (const Gui& g : guis) s.add_gui(g);
  return s;
}

std::string corpus_hash(const std::vector<Gui>& guis) {
  std::string all;
  for (const Gui& g : guis) {
    all += gui_to_json(g);
    all += '\n';
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(all)));
  return buf;
}

NetConfig net_config_for(const std::vector<Gui>& guis, NetConfig base) {
  int m = 1;
  std::set<std::string> topics;
  for (const Gui& g : guis) {
    m = std::max({m, g.canvas_w, g.canvas_h});
    if (g.topic) topics.insert(*g.topic);
  }
  base.embed.max_coord = m;
  if (!topics.empty()) base.topics.assign(topics.begin(), topics.end());
  return base;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double frac,
                                                                            std::uint64_t seed) {
  if (!(frac >= 0.0 && frac <= 1.0)) throw ValidationError("split: fraction must be in [0, 1]");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n > 0 ? n - 1 : 0; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  const std::size_t held = static_cast<std::size_t>(std::lround(frac * static_cast<double>(n)));
  std::vector<std::size_t> test(perm.begin(), perm.begin() + static_cast<long>(held));
  std::vector<std::size_t> train(perm.begin() + static_cast<long>(held), perm.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {train, test};
}

namespace {

Tensor normalized(const BBox& b, int W, int H) {
  return Tensor::row({double(b.x) / W, double(b.y) / H, double(b.w) / W, double(b.h) / H});
}

struct Draw {
  LayoutGraph graph;
  std::vector<Element> targets;  // unplaced copies
  Tensor truth;                  // T x 4, normalised
  Tensor flags;                  // (T * N) x 1, target-major
  Tensor recon;                  // M x 4, normalised
  std::size_t label = 0;
};

std::vector<Draw> autocomplete_draws(const std::vector<Gui>& guis, const TrainConfig& cfg) {
  const auto pairs = make_dataset_pairs(guis, cfg.seed ^ 0x5eedull, cfg.chunks_per_gui);
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i + 1;
    while (j < pairs.size() && pairs[j].gui == pairs[i].gui && pairs[j].draw == pairs[i].draw) ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  std::vector<Draw> draws(runs.size());
  const long n = static_cast<long>(runs.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < n; ++r) {
    try {
      const auto [b, e] = runs[static_cast<std::size_t>(r)];
      const Gui& partial = pairs[b].partial;
      const int W = partial.canvas_w, H = partial.canvas_h;
      Draw& d = draws[static_cast<std::size_t>(r)];
      d.graph = build_graph(partial, extract_placed(partial, cfg.ext));
      std::vector<double> flags;
      std::vector<double> truth;
      for (std::size_t i = b; i < e; ++i) {
        const Element& t = pairs[i].target;
        const auto f = truth_flags(partial, d.graph, t, cfg.ext);
        flags.insert(flags.end(), f.begin(), f.end());
        const Tensor tb = normalized(*t.bbox, W, H);
        truth.insert(truth.end(), tb.data().begin(), tb.data().end());
        Element u = t;
        u.bbox.reset();
        d.targets.push_back(std::move(u));
      }
      d.truth = Tensor(e - b, 4, std::move(truth));
      const std::size_t nf = flags.size();
      d.flags = Tensor(nf, 1, std::move(flags));
      std::vector<double> rec;
      for (const Element& el : d.graph.elements) {
        const Tensor tb = normalized(*el.bbox, W, H);
        rec.insert(rec.end(), tb.data().begin(), tb.data().end());
      }
      d.recon = Tensor(d.graph.element_count(), 4, std::move(rec));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return draws;
}

std::vector<Draw> classify_draws(const std::vector<Gui>& guis, const TrainConfig& cfg, const NetConfig& net) {
  std::vector<Draw> draws;
  Rng rng(cfg.seed ^ 0xc1a55ull);
  for (std::size_t i = 0; i < guis.size(); ++i) {
    const Gui& g = guis[i];
    if (!g.topic) throw ValidationError("train: GUI " + std::to_string(i) + " has no topic");
    auto it = std::find(net.topics.begin(), net.topics.end(), *g.topic);
    if (it == net.topics.end()) throw ValidationError("train: topic '" + *g.topic + "' is not in the model");
    const std::size_t label = static_cast<std::size_t>(it - net.topics.begin());
    Draw full;
    full.graph = build_graph(g, extract_all(g, cfg.ext));
    full.label = label;
    draws.push_back(std::move(full));
    if (g.elements.size() >= 4) {
      const auto pairs = make_pairs(g, rng.next(), 1);
      Draw part;
      part.graph = build_graph(pairs.front().partial, extract_placed(pairs.front().partial, cfg.ext));
      part.label = label;
      draws.push_back(std::move(part));
    }
  }
  return draws;
}

LossReport sample_loss(Tape& tape, const LayoutNet& net, const Draw& d, const TrainConfig& cfg, Var& out) {
  const auto enc = net.encode(tape, d.graph);
  LossReport rep;
  if (cfg.task == TrainTask::Classify) {
    out = cross_entropy(net.classify_logits(tape, enc.h_g), d.label);
    rep.total = out.value().item();
    return rep;
  }
  std::vector<Var> places, probs;
  for (const Element& t : d.targets) {
    const Var h_t = net.encode_target(tape, t);
    places.push_back(net.placement(tape, h_t, enc.h_g));
    probs.push_back(net.constraint_probs(tape, h_t, enc));
  }
  const LossVars lv =
      total_loss(tape, concat_rows(places), d.truth, concat_rows(probs), d.flags, 1.0, 1.0, cfg.weights);
  rep = lv.report();
  out = lv.total;
  if (cfg.recon_weight > 0.0) {
    const Var rec = mse(net.reconstruct(tape, enc), tape.constant(d.recon));
    out = add(out, scale(rec, cfg.recon_weight));
  }
  return rep;
}

void add_report(LossReport& acc, const LossReport& r, double w) {
  acc.total += w * r.total;
  acc.element_mse += w * r.element_mse;
  acc.boundary += w * r.boundary;
  acc.constraint_bce += w * r.constraint_bce;
}

}  // namespace

TrainResult train(LayoutNet& net, const std::vector<Gui>& guis, const TrainConfig& cfg, const StepCallback& on_step) {
  cfg.validate();
  if (guis.empty()) throw ValidationError("train: empty corpus");
  const std::vector<Draw> draws =
      cfg.task == TrainTask::Classify ? classify_draws(guis, cfg, net.config()) : autocomplete_draws(guis, cfg);
  if (draws.empty()) throw ValidationError("train: no training samples");

  ParamStore& store = net.params();
  AdamState state;
  Rng rng(cfg.seed ^ 0x0de7ull);
  std::vector<std::size_t> order(draws.size());
  std::iota(order.begin(), order.end(), 0);
  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
    LossReport epoch_sum;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch));
      const std::size_t bs = end - start;
      std::vector<Gradients> grads(bs, Gradients(store.size()));
      std::vector<LossReport> reps(bs);
      std::exception_ptr err;
      const long n = static_cast<long>(bs);
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < n; ++i) {
        try {
          Tape tape;
          Var loss;
          reps[static_cast<std::size_t>(i)] =
              sample_loss(tape, net, draws[order[start + static_cast<std::size_t>(i)]], cfg, loss);
          tape.backward(scale(loss, 1.0 / static_cast<double>(bs)));
          tape.collect(grads[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical
          if (!err) err = std::current_exception();
        }
      }
      if (err) std::rethrow_exception(err);
      Gradients total(store.size());
      LossReport mean;
      for (std::size_t i = 0; i < bs; ++i) {
        total.accumulate(grads[i]);
        add_report(mean, reps[i], 1.0 / static_cast<double>(bs));
        add_report(epoch_sum, reps[i], 1.0 / static_cast<double>(draws.size()));
      }
      adam_step(store, total, state, cfg.adam);
      ++result.steps;
      if (on_step) on_step(result.steps, mean);
    }
    result.last_epoch = epoch_sum;
  }
  return result;
}

}  // namespace lg
