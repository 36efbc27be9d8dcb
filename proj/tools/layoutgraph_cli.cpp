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

// layoutgraph: command-line driver for data generation, extraction,
// training, evaluation, suggestion, classification, retrieval and serving.
//
// Exit codes: 0 success, 1 invalid input, 2 I/O failure. Errors are written
// to stderr as {"error": category, "message": text}.

#include <httplib.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "layoutgraph/autocomplete.hpp"
#include "layoutgraph/error.hpp"
#include "layoutgraph/eval.hpp"
#include "layoutgraph/kernels.hpp"
#include "layoutgraph/service.hpp"
#include "layoutgraph/synth.hpp"
#include "layoutgraph/tasks.hpp"
#include "layoutgraph/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lg;

namespace {

// Config file reader: a JSON object whose keys mirror long flag names.
// Nested objects address subcommands, e.g. {"threads": 2, "train": {"epochs": 5}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<CLI::ConfigItem> out;
    flatten(j, {}, out);
    return out;
  }

 private:
  static void flatten(const json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto p = parents;
        p.push_back(it.key());
        flatten(*it, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_string()) {
        item.inputs = {it->get<std::string>()};
      } else if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      } else {
        item.inputs = {it->dump()};
      }
      out.push_back(std::move(item));
    }
  }
};

struct Globals {
  bool json_out = false;
  int threads = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << bytes;
  if (!out) throw IoError("cannot write " + path);
}

Gui load_gui(const std::string& path) { return gui_from_json(read_file(path)); }

struct Corpus {
  std::vector<std::string> ids;
  std::vector<Gui> guis;
};

// Every *.json file of dir, ordered by file name; ids are the file stems.
Corpus load_corpus(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  Corpus c;
  for (const auto& f : files) {
    c.ids.push_back(f.stem().string());
    try {
      c.guis.push_back(load_gui(f.string()));
    } catch (const ValidationError& e) {
      throw ValidationError(f.filename().string() + ": " + e.what());
    }
  }
  if (c.guis.empty()) throw ValidationError("no GUI documents in " + dir);
  return c;
}

struct Model {
  Checkpoint ck;
  LayoutNet net;
};

Model load_model(const std::string& path) {
  Checkpoint ck = load_checkpoint(path);
  LayoutNet net = LayoutNet::from_checkpoint(ck);
  return {std::move(ck), std::move(net)};
}

bool trained_for(const Checkpoint& ck, TrainTask t) {
  try {
    require_trained(ck, t);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

json model_info(const Checkpoint& ck) {
  json info = ck.meta;
  info.erase("corpus_stats");
  return info;
}

json report_json(const LossReport& r) {
  return {{"total", r.total}, {"element_mse", r.element_mse}, {"boundary", r.boundary},
          {"constraint_bce", r.constraint_bce}};
}

void emit(const Globals& g, const json& out) {
  std::cout << (g.json_out ? out.dump() : out.dump(2)) << '\n';
}

void note(const Globals& g, const std::string& line) {
  if (!g.json_out) std::cerr << line << '\n';
}

// ---- subcommands ----

struct GenArgs {
  std::uint64_t seed = 1;
  int count = 100;
  std::string out;
  int width = 360, height = 640;
};

void run_gen(const Globals& g, const GenArgs& a) {
  SynthConfig cfg{a.width, a.height};
  const auto guis = gen_synthetic(a.seed, static_cast<std::size_t>(a.count), cfg);
  std::map<std::string, int> topics;
  for (std::size_t i = 0; i < guis.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "gui_%05zu.json", i);
    write_file((fs::path(a.out) / name).string(), gui_to_json(guis[i]));
    ++topics[*guis[i].topic];
  }
  emit(g, {{"count", guis.size()}, {"out", a.out}, {"topics", topics}, {"corpus_hash", corpus_hash(guis)}});
}

struct ExtractArgs {
  std::string in, out;
  int tol = 2;
};

void run_extract(const Globals& g, const ExtractArgs& a) {
  ExtractionConfig ext;
  ext.tol = a.tol;
  ext.validate();
  const std::string bytes = constraints_to_json(extract_placed(load_gui(a.in), ext));
  if (a.out.empty()) {
    emit(g, json::parse(bytes));
    return;
  }
  write_file(a.out, bytes);
  emit(g, {{"constraints", json::parse(bytes).size()}, {"out", a.out}});
}

struct PairsArgs {
  std::string data, out, mode = "contiguous";
  std::uint64_t seed = 1;
  int chunks = 30;
};

void run_pairs(const Globals& g, const PairsArgs& a) {
  const auto corpus = load_corpus(a.data);
  const ChunkMode mode = a.mode == "uniform" ? ChunkMode::Uniform : ChunkMode::Contiguous;
  const auto pairs = make_dataset_pairs(corpus.guis, a.seed, a.chunks, mode);
  write_file(a.out, pairs_to_json(pairs));
  emit(g, {{"pairs", pairs.size()}, {"guis", corpus.guis.size()}, {"out", a.out}});
}

struct TrainArgs {
  std::string data, out, log, init, task = "autocomplete";
  int epochs = 10, batch = 16, chunks = 30;
  std::uint64_t seed = 1;
  double lambda = 1.0, eta = 1.0, lr = 1e-3, recon = 1.0, holdout = 0.0;
  int node_dim = 256, coord_dim = 16, type_dim = 16, text_dim = 64, appearance_dim = 64, layers = 2;
};

void run_train(const Globals& g, const TrainArgs& a) {
  const auto corpus = load_corpus(a.data);
  TrainConfig tc;
  tc.task = train_task_from_string(a.task);
  tc.epochs = a.epochs;
  tc.seed = a.seed;
  tc.batch = a.batch;
  tc.chunks_per_gui = a.chunks;
  tc.recon_weight = a.recon;
  tc.weights = {a.lambda, a.eta};
  tc.adam.lr = a.lr;
  tc.validate();

  const auto [train_idx, held_idx] = split_indices(corpus.guis.size(), a.holdout, a.seed);
  std::vector<Gui> train_set;
  for (auto i : train_idx) train_set.push_back(corpus.guis[i]);

  json meta = json::object();
  std::optional<LayoutNet> net;
  if (!a.init.empty()) {
    Model m = load_model(a.init);
    meta = m.ck.meta;
    meta.erase("config");
    meta.erase("corpus_stats");
    net.emplace(std::move(m.net));
  } else {
    NetConfig base;
    base.embed.node_dim = a.node_dim;
    base.embed.coord_dim = a.coord_dim;
    base.embed.type_dim = a.type_dim;
    base.embed.text_dim = a.text_dim;
    base.embed.appearance_dim = a.appearance_dim;
    base.layers = a.layers;
    net.emplace(net_config_for(corpus.guis, base), a.seed, corpus_stats(train_set));
  }

  const std::string log_path = a.log.empty() ? a.out + ".csv" : a.log;
  std::ostringstream csv;
  csv << "step,total,element_mse,boundary,constraint_bce\n";
  csv.precision(17);
  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult r = train(*net, train_set, tc, [&](std::size_t step, const LossReport& l) {
    csv << step << ',' << l.total << ',' << l.element_mse << ',' << l.boundary << ',' << l.constraint_bce << '\n';
    if (step % 50 == 0) note(g, "step " + std::to_string(step) + " loss " + std::to_string(l.total));
  });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  mark_trained(meta, tc.task);
  meta["seed"] = a.seed;
  meta["corpus_hash"] = corpus_hash(corpus.guis);
  meta["train"][a.task] = {{"epochs", a.epochs}, {"batch", a.batch}, {"chunks", a.chunks}, {"lambda", a.lambda},
                           {"eta", a.eta},       {"lr", a.lr},       {"recon", a.recon},   {"holdout", a.holdout},
                           {"steps", r.steps}};
  save_checkpoint(a.out, net->to_checkpoint(meta));
  write_file(log_path, csv.str());

  json out = {{"steps", r.steps},  {"loss", report_json(r.last_epoch)}, {"checkpoint", a.out},
              {"log", log_path},   {"seconds", secs},                    {"train_size", train_set.size()},
              {"held_out", held_idx.size()}};
  if (tc.task == TrainTask::Classify && !held_idx.empty()) {
    std::size_t right = 0;
    for (auto i : held_idx) right += classify(*net, corpus.guis[i], tc.ext).label == corpus.guis[i].topic.value_or("");
    out["held_out_accuracy"] = static_cast<double>(right) / static_cast<double>(held_idx.size());
  }
  emit(g, out);
}

struct RefineArgs {
  double sigma = 20.0, threshold = 0.5;
  RefineConfig config() const {
    RefineConfig c{sigma, threshold};
    c.validate();
    return c;
  }
};

struct EvalArgs {
  std::string model, pairs, report, placer = "model";
  RefineArgs refine;
};

void run_eval(const Globals& g, const EvalArgs& a) {
  const auto pairs = pairs_from_json(read_file(a.pairs));
  const RefineConfig rc = a.refine.config();
  std::optional<Model> m;
  std::optional<NetTargetModel> tm;
  if (a.placer == "model" || a.placer == "oracle-constraint") {
    if (a.model.empty()) throw ValidationError("--model is required for placer " + a.placer);
    m.emplace(load_model(a.model));
    tm.emplace(m->net);
    if (!trained_for(m->ck, TrainTask::Autocomplete)) note(g, "warning: checkpoint not trained for autocomplete");
  }
  std::unique_ptr<Placer> placer;
  if (a.placer == "model") placer = std::make_unique<ModelPlacer>(*tm, rc);
  else if (a.placer == "oracle-constraint") placer = std::make_unique<OracleConstraintPlacer>(*tm, ExtractionConfig{});
  else if (a.placer == "center") placer = std::make_unique<CenterPlacer>();
  else if (a.placer == "oracle") placer = std::make_unique<OraclePlacer>();
  else throw ValidationError("unknown placer '" + a.placer + "'");
  json rep = to_json(evaluate(*placer, pairs));
  rep["placer"] = a.placer;
  if (!a.report.empty()) write_file(a.report, rep.dump(2));
  emit(g, a.report.empty() ? rep : json{{"placer", a.placer}, {"overall", rep["overall"]}, {"report", a.report}});
}

struct SuggestArgs {
  std::string model, gui, mode = "single", target;
  RefineArgs refine;
};

void run_suggest(const Globals& g, const SuggestArgs& a) {
  const Model m = load_model(a.model);
  const NetTargetModel tm(m.net);
  const Gui gui = load_gui(a.gui);
  const RefineConfig rc = a.refine.config();
  if (!a.target.empty() && a.mode != "single") throw ValidationError("--target needs --mode single");
  if (!trained_for(m.ck, TrainTask::Autocomplete)) note(g, "warning: checkpoint not trained for autocomplete");
  if (a.mode == "single") {
    emit(g, to_json(a.target.empty() ? suggest_one(gui, tm, rc) : suggest_for(gui, a.target, tm, rc)));
    return;
  }
  std::vector<Suggestion> out;
  if (a.mode == "group") out = suggest_group(gui, tm, rc);
  else if (a.mode == "all") out = suggest_all(gui, tm, rc);
  else throw ValidationError("unknown mode '" + a.mode + "'");
  json arr = json::array();
  for (const auto& s : out) arr.push_back(to_json(s));
  emit(g, arr);
}

struct ClassifyArgs {
  std::string model, gui;
};

void run_classify(const Globals& g, const ClassifyArgs& a) {
  const Model m = load_model(a.model);
  const auto c = classify(m.net, load_gui(a.gui));
  const bool trained = trained_for(m.ck, TrainTask::Classify);
  if (!trained) note(g, "warning: checkpoint not trained for classify");
  json probs = json::object();
  for (std::size_t i = 0; i < c.probs.size(); ++i) probs[m.net.config().topics.at(i)] = c.probs[i];
  emit(g, {{"label", c.label}, {"probs", probs}, {"trained", trained}});
}

struct IndexArgs {
  std::string model, data, out, metric = "euclidean";
};

void run_index(const Globals& g, const IndexArgs& a) {
  const Model m = load_model(a.model);
  const auto corpus = load_corpus(a.data);
  auto idx = build_index(m.net, corpus.guis, corpus.ids, metric_from_string(a.metric));
  Checkpoint ck = index_to_checkpoint(idx);
  ck.meta["model"] = fs::absolute(a.model).string();
  ck.meta["trained"] = trained_for(m.ck, TrainTask::Classify);
  save_checkpoint(a.out, ck);
  emit(g, {{"entries", idx.size()}, {"metric", a.metric}, {"out", a.out}, {"trained", ck.meta["trained"]}});
}

struct RetrieveArgs {
  std::string index, gui, model, query_id;
  int k = 5;
};

void run_retrieve(const Globals& g, const RetrieveArgs& a) {
  const Checkpoint ick = load_checkpoint(a.index);
  const EmbeddingIndex idx = index_from_checkpoint(ick);
  const std::string model_path = a.model.empty() ? ick.meta.value("model", std::string()) : a.model;
  if (model_path.empty()) throw ValidationError("index names no model; pass --model");
  const Model m = load_model(model_path);
  if (a.k < 1) throw ValidationError("k must be >= 1");
  const auto q = gui_embedding(m.net, load_gui(a.gui));
  const auto nn = retrieve(idx, q, static_cast<std::size_t>(a.k),
                           a.query_id.empty() ? std::nullopt : std::optional<std::string>(a.query_id));
  json arr = json::array();
  for (const auto& n : nn) arr.push_back({{"id", n.id}, {"distance", n.distance}});
  emit(g, {{"neighbors", arr}, {"metric", std::string(to_string(idx.metric))}});
}

struct ServeArgs {
  std::string model, host = "127.0.0.1", snapshots;
  int port = kDefaultPort;
  RefineArgs refine;
};

void run_serve(const Globals& g, const ServeArgs& a) {
  const Model m = load_model(a.model);
  const NetTargetModel tm(m.net);
  ServiceConfig cfg;
  cfg.refine = a.refine.config();
  cfg.snapshot_dir = a.snapshots;
  if (!a.snapshots.empty()) fs::create_directories(a.snapshots);
  SessionManager sessions(tm, cfg, model_info(m.ck));
  const std::size_t restored = sessions.restore();
  httplib::Server server;
  mount_routes(server, sessions);
  if (!server.bind_to_port(a.host, a.port)) throw IoError("cannot bind " + a.host + ":" + std::to_string(a.port));
  emit(g, {{"listening", a.host + ":" + std::to_string(a.port)}, {"restored_sessions", restored}});
  std::cout.flush();
  server.listen_after_bind();
}

int fail(int code, const char* category, const std::string& message) {
  std::cerr << json{{"error", category}, {"message", message}}.dump() << '\n';
  return code;
}

void add_refine(CLI::App* sub, RefineArgs& r) {
  sub->add_option("--sigma", r.sigma, "Snapping distance in pixels")->capture_default_str();
  sub->add_option("--threshold", r.threshold, "Probability threshold for a predicted constraint")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LayoutGraph: graph-based GUI layout autocompletion"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (keys mirror flag names)")->envname("LAYOUTGRAPH_CONFIG");
  Globals g;
  app.add_flag("--json", g.json_out, "Print compact JSON only");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  GenArgs gen;
  auto* s_gen = app.add_subcommand("gen-synthetic", "Write a synthetic GUI corpus");
  s_gen->add_option("--seed", gen.seed)->capture_default_str();
  s_gen->add_option("--count", gen.count)->capture_default_str()->check(CLI::PositiveNumber);
  s_gen->add_option("--out", gen.out, "Output directory")->required();
  s_gen->add_option("--width", gen.width)->capture_default_str();
  s_gen->add_option("--height", gen.height)->capture_default_str();

  ExtractArgs ex;
  auto* s_ex = app.add_subcommand("extract-constraints", "Extract the constraints of a GUI");
  s_ex->add_option("--in", ex.in)->required();
  s_ex->add_option("--out", ex.out, "Output file (stdout when omitted)");
  s_ex->add_option("--tol", ex.tol, "Pixel tolerance")->capture_default_str();

  PairsArgs pa;
  auto* s_pairs = app.add_subcommand("pairs", "Generate partial-GUI samples");
  s_pairs->add_option("--data", pa.data)->required();
  s_pairs->add_option("--out", pa.out)->required();
  s_pairs->add_option("--seed", pa.seed)->capture_default_str();
  s_pairs->add_option("--chunks", pa.chunks, "Draws per GUI")->capture_default_str();
  s_pairs->add_option("--mode", pa.mode)->capture_default_str()->check(CLI::IsMember({"contiguous", "uniform"}));

  TrainArgs tr;
  auto* s_train = app.add_subcommand("train", "Train a model");
  s_train->add_option("--data", tr.data)->required();
  s_train->add_option("--out", tr.out, "Checkpoint path")->required();
  s_train->add_option("--task", tr.task)->capture_default_str()->check(CLI::IsMember({"autocomplete", "classify"}));
  s_train->add_option("--epochs", tr.epochs)->capture_default_str();
  s_train->add_option("--seed", tr.seed)->capture_default_str();
  s_train->add_option("--lambda", tr.lambda, "Constraint term weight")->capture_default_str();
  s_train->add_option("--eta", tr.eta, "Boundary term weight")->capture_default_str();
  s_train->add_option("--lr", tr.lr)->capture_default_str();
  s_train->add_option("--batch", tr.batch)->capture_default_str();
  s_train->add_option("--chunks", tr.chunks, "Partial draws per GUI")->capture_default_str();
  s_train->add_option("--recon", tr.recon, "Reconstruction loss weight")->capture_default_str();
  s_train->add_option("--holdout", tr.holdout, "Held-out share of the corpus")->capture_default_str();
  s_train->add_option("--log", tr.log, "CSV loss log (default <out>.csv)");
  s_train->add_option("--init", tr.init, "Continue from this checkpoint");
  s_train->add_option("--node-dim", tr.node_dim)->capture_default_str();
  s_train->add_option("--coord-dim", tr.coord_dim)->capture_default_str();
  s_train->add_option("--type-dim", tr.type_dim)->capture_default_str();
  s_train->add_option("--text-dim", tr.text_dim)->capture_default_str();
  s_train->add_option("--appearance-dim", tr.appearance_dim)->capture_default_str();
  s_train->add_option("--layers", tr.layers)->capture_default_str();

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "Score a placer on partial-GUI samples");
  s_eval->add_option("--model", ev.model);
  s_eval->add_option("--pairs", ev.pairs)->required();
  s_eval->add_option("--report", ev.report, "Write the full report here");
  s_eval->add_option("--placer", ev.placer)
      ->capture_default_str()
      ->check(CLI::IsMember({"model", "oracle-constraint", "center", "oracle"}));
  add_refine(s_eval, ev.refine);

  SuggestArgs sg;
  auto* s_sug = app.add_subcommand("suggest", "Suggest placements for unplaced elements");
  s_sug->add_option("--model", sg.model)->required();
  s_sug->add_option("--gui", sg.gui)->required();
  s_sug->add_option("--mode", sg.mode)->capture_default_str()->check(CLI::IsMember({"single", "group", "all"}));
  s_sug->add_option("--target", sg.target, "Element to place (single mode)");
  add_refine(s_sug, sg.refine);

  ClassifyArgs cl;
  auto* s_cls = app.add_subcommand("classify", "Predict the topic of a GUI");
  s_cls->add_option("--model", cl.model)->required();
  s_cls->add_option("--gui", cl.gui)->required();

  IndexArgs ix;
  auto* s_idx = app.add_subcommand("index", "Build an embedding index over a corpus");
  s_idx->add_option("--model", ix.model)->required();
  s_idx->add_option("--data", ix.data)->required();
  s_idx->add_option("--out", ix.out)->required();
  s_idx->add_option("--metric", ix.metric)->capture_default_str()->check(CLI::IsMember({"euclidean", "cosine"}));

  RetrieveArgs rt;
  auto* s_ret = app.add_subcommand("retrieve", "Nearest GUIs in an index");
  s_ret->add_option("--index", rt.index)->required();
  s_ret->add_option("--gui", rt.gui)->required();
  s_ret->add_option("-k", rt.k)->capture_default_str();
  s_ret->add_option("--model", rt.model, "Override the model named by the index");
  s_ret->add_option("--exclude", rt.query_id, "Index id of the query itself");

  ServeArgs sv;
  auto* s_srv = app.add_subcommand("serve", "Run the HTTP session service");
  s_srv->add_option("--model", sv.model)->required();
  s_srv->add_option("--port", sv.port)->capture_default_str();
  s_srv->add_option("--host", sv.host)->capture_default_str();
  s_srv->add_option("--snapshots", sv.snapshots, "Persist session snapshots in this directory");
  add_refine(s_srv, sv.refine);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    return fail(2, "io", e.what());
  } catch (const CLI::ParseError& e) {
    return fail(1, "usage", e.what());
  }

  if (g.threads > 0) {
    kernels::set_num_threads(g.threads);
#ifdef _OPENMP
    omp_set_num_threads(g.threads);
#endif
  }

  try {
    if (*s_gen) run_gen(g, gen);
    else if (*s_ex) run_extract(g, ex);
    else if (*s_pairs) run_pairs(g, pa);
    else if (*s_train) run_train(g, tr);
    else if (*s_eval) run_eval(g, ev);
    else if (*s_sug) run_suggest(g, sg);
    else if (*s_cls) run_classify(g, cl);
    else if (*s_idx) run_index(g, ix);
    else if (*s_ret) run_retrieve(g, rt);
    else if (*s_srv) run_serve(g, sv);
  } catch (const IoError& e) {
    return fail(2, e.category(), e.what());
  } catch (const Error& e) {
    return fail(1, e.category(), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(2, "io", e.what());
  } catch (const json::exception& e) {
    return fail(1, "parse", e.what());
  }
  return 0;
}
