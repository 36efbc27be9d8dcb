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

#include "layoutgraph/service.hpp"

#include <httplib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "layoutgraph/error.hpp"

namespace lg {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json bbox_json(const BBox& b) { return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

BBox bbox_from(const json& j) {
  if (!j.is_object()) throw ParseError("bbox must be an object");
  BBox b;
  int* slots[] = {&b.x, &b.y, &b.w, &b.h};
  const char* keys[] = {"x", "y", "w", "h"};
  for (int i = 0; i < 4; ++i) {
    const auto it = j.find(keys[i]);
    if (it == j.end() || !it->is_number_integer()) throw ParseError(std::string("bbox: '") + keys[i] + "' must be an integer");
    *slots[i] = it->get<int>();
  }
  return b;
}

Element& element_ref(Gui& g, const std::string& id) {
  for (auto& e : g.elements)
    if (e.id == id) return e;
  throw NotFoundError("unknown element '" + id + "'");
}

struct Replayer {
  Gui gui;
  std::vector<Element> placed_before;  // undo stack

  void apply(const json& ev) {
    const std::string type = ev.value("type", std::string());
    if (type == "add_element") {
      Gui next = gui;
      Element e = element_from_json(ev.at("element"));
      if (e.placed()) throw ValidationError("add_element: element must be unplaced");
      next.elements.push_back(std::move(e));
      validate(next);
      gui = std::move(next);
    } else if (type == "place") {
      const std::string id = ev.at("element_id").get<std::string>();
      const Element* before = gui.find(id);
      if (!before) throw NotFoundError("unknown element '" + id + "'");
      Element saved = *before;
      gui = accept(gui, id, bbox_from(ev.at("bbox")));
      placed_before.push_back(std::move(saved));
    } else if (type == "undo") {
      if (placed_before.empty()) throw ConflictError("nothing to undo");
      element_ref(gui, placed_before.back().id) = placed_before.back();
      placed_before.pop_back();
    } else {
      throw ValidationError("unknown event type '" + type + "'");
    }
  }
};

}  // namespace

Gui replay(const Gui& initial, const json& history) {
  if (!history.is_array()) throw ValidationError("history must be an array");
  Replayer r{initial, {}};
  for (const auto& ev : history) r.apply(ev);
  return r.gui;
}

std::string state_hash(const Gui& gui, const json& history) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(history.dump(), fnv1a(gui_to_json(gui)))));
  return buf;
}

struct SessionManager::Session {
  std::string id;
  Gui initial;
  json history = json::array();
  Replayer current;
  mutable std::shared_mutex mu;
};

SessionManager::SessionManager(const TargetModel& model, ServiceConfig cfg, json model_info)
    : model_(model), cfg_(std::move(cfg)), info_(std::move(model_info)) {
  cfg_.refine.validate();
  cfg_.ext.validate();
}

std::string SessionManager::fresh_id() {
  static thread_local std::random_device rd;
  const std::uint64_t r = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(r ^ (++counter_ * 0x9e3779b97f4a7c15ull)));
  return buf;
}

std::string SessionManager::create(const Gui& gui) {
  validate(gui);
  auto s = std::make_shared<Session>();
  s->initial = gui;
  s->current.gui = gui;
  std::unique_lock lock(mu_);
  do s->id = fresh_id();
  while (sessions_.count(s->id));
  sessions_[s->id] = s;
  return s->id;
}

std::size_t SessionManager::restore() {
  namespace fs = std::filesystem;
  if (cfg_.snapshot_dir.empty() || !fs::is_directory(cfg_.snapshot_dir)) return 0;
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(cfg_.snapshot_dir)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    json doc;
    try {
      doc = json::parse(ss.str());
    } catch (const json::exception& e) {
      throw ParseError("snapshot " + entry.path().string() + ": " + e.what());
    }
    auto s = std::make_shared<Session>();
    s->id = doc.at("session_id").get<std::string>();
    s->initial = gui_from_json(doc.at("initial").dump());
    s->current.gui = s->initial;
    for (const auto& ev : doc.at("history")) {
      s->current.apply(ev);
      s->history.push_back(ev);
    }
    std::unique_lock lock(mu_);
    sessions_[s->id] = s;
    ++n;
  }
  return n;
}

std::size_t SessionManager::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

json SessionManager::state_of(const Session& s) const {
  const Gui& g = s.current.gui;
  json pool = json::array();
  for (const auto& e : g.elements)
    if (!e.placed()) pool.push_back(e.id);
  return {{"session_id", s.id},
          {"gui", json::parse(gui_to_json(g))},
          {"pool", pool},
          {"constraints", json::parse(constraints_to_json(extract_placed(g, cfg_.ext)))},
          {"history", s.history},
          {"last_event", static_cast<long>(s.history.size()) - 1},
          {"state_hash", state_hash(g, s.history)}};
}

json SessionManager::state(const std::string& id) const {
  const auto s = find(id);
  std::shared_lock lock(s->mu);
  return state_of(*s);
}

json SessionManager::suggest(const std::string& id, const std::string& mode,
                             const std::optional<std::string>& target) const {
  const auto s = find(id);
  std::shared_lock lock(s->mu);
  const Gui& g = s->current.gui;
  std::vector<Suggestion> out;
  if (mode == "single") {
    out.push_back(target ? suggest_for(g, *target, model_, cfg_.refine, cfg_.ext)
                         : suggest_one(g, model_, cfg_.refine, cfg_.ext));
  } else if (target) {
    throw ParseError("target is only valid with mode=single");
  } else if (mode == "group") {
    out = suggest_group(g, model_, cfg_.refine, cfg_.ext);
  } else if (mode == "all") {
    out = suggest_all(g, model_, cfg_.refine, cfg_.ext);
  } else {
    throw ParseError("mode must be single, group or all");
  }
  json list = json::array();
  for (const auto& sg : out) list.push_back(to_json(sg));
  return {{"mode", mode}, {"last_event", static_cast<long>(s->history.size()) - 1}, {"suggestions", list}};
}

json SessionManager::preview(const std::string& id, const std::string& target) const {
  const auto s = find(id);
  std::shared_lock lock(s->mu);
  return to_json(suggest_for(s->current.gui, target, model_, cfg_.refine, cfg_.ext));
}

void SessionManager::append(Session& s, json event, long last_event) {
  const long head = static_cast<long>(s.history.size()) - 1;
  if (last_event != head)
    throw ConflictError("stale event index " + std::to_string(last_event) + ", session is at " + std::to_string(head));
  event["index"] = head + 1;
  Replayer next = s.current;
  next.apply(event);
  s.current = std::move(next);
  s.history.push_back(std::move(event));
  if (!cfg_.snapshot_dir.empty()) {
    const auto path = std::filesystem::path(cfg_.snapshot_dir) / (s.id + ".json");
    std::ofstream out(path, std::ios::trunc);
    out << json{{"session_id", s.id}, {"initial", json::parse(gui_to_json(s.initial))}, {"history", s.history}}.dump();
    if (!out) throw IoError("cannot write snapshot " + path.string());
  }
}

json SessionManager::add_element(const std::string& id, const Element& e, long last_event) {
  const auto s = find(id);
  std::unique_lock lock(s->mu);
  append(*s, {{"type", "add_element"}, {"element", element_to_json(e)}}, last_event);
  return state_of(*s);
}

json SessionManager::place(const std::string& id, const std::string& element_id, const BBox& bbox, long last_event) {
  const auto s = find(id);
  std::unique_lock lock(s->mu);
  append(*s, {{"type", "place"}, {"element_id", element_id}, {"bbox", bbox_json(bbox)}}, last_event);
  return state_of(*s);
}

json SessionManager::undo(const std::string& id, long last_event) {
  const auto s = find(id);
  std::unique_lock lock(s->mu);
  if (s->current.placed_before.empty()) throw ConflictError("nothing to undo");
  append(*s, {{"type", "undo"}, {"element_id", s->current.placed_before.back().id}}, last_event);
  return state_of(*s);
}

namespace {

int status_of(const Error& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const ConflictError*>(&e)) return 409;
  if (dynamic_cast<const ValidationError*>(&e)) return 422;
  if (dynamic_cast<const ParseError*>(&e)) return 400;
  return 500;
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    reply(res, status_of(e), {{"error", e.category()}, {"message", e.what()}});
  } catch (const json::exception& e) {
    reply(res, 400, {{"error", "parse"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
  }
}

json body_of(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("request body: ") + e.what());
  }
}

long last_event_of(const json& body) {
  const auto it = body.find("last_event");
  if (it == body.end() || !it->is_number_integer()) throw ParseError("request needs integer 'last_event'");
  return it->get<long>();
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

}  // namespace

void mount_routes(httplib::Server& server, SessionManager& sessions) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = sessions.create(gui_from_json(req.body));
      reply(res, 201, {{"session_id", id}, {"last_event", -1}});
    });
  });
  server.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, sessions.state(req.matches[1])); });
  });
  server.Post(R"(/sessions/([^/]+)/elements)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = body_of(req);
      if (!body.contains("element")) throw ParseError("request needs 'element'");
      reply(res, 200, sessions.add_element(req.matches[1], element_from_json(body["element"]), last_event_of(body)));
    });
  });
  server.Get(R"(/sessions/([^/]+)/suggest)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      reply(res, 200, sessions.suggest(req.matches[1], param(req, "mode").value_or("single"), param(req, "target")));
    });
  });
  server.Get(R"(/sessions/([^/]+)/preview)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto target = param(req, "target");
      if (!target) throw ParseError("preview needs 'target'");
      reply(res, 200, sessions.preview(req.matches[1], *target));
    });
  });
  server.Post(R"(/sessions/([^/]+)/place)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = body_of(req);
      if (!body.contains("element_id") || !body["element_id"].is_string())
        throw ParseError("request needs string 'element_id'");
      if (!body.contains("bbox")) throw ParseError("request needs 'bbox'");
      reply(res, 200,
            sessions.place(req.matches[1], body["element_id"].get<std::string>(), bbox_from(body["bbox"]),
                           last_event_of(body)));
    });
  });
  server.Post(R"(/sessions/([^/]+)/undo)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, sessions.undo(req.matches[1], last_event_of(body_of(req)))); });
  });
  server.Get("/model/info", [&](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, sessions.model_info()); });
  });
}

}  // namespace lg
