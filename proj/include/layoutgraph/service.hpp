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

// Session service for interactive clients.
//
// A session owns a GUI and an append-only event log (add_element, place,
// undo). The current GUI is always replay(initial, history); each mutating
// call appends exactly one event. Mutations name the index of the last event
// the client saw (-1 for none) and fail with ConflictError when it is stale.
// Reads (state, suggest, preview) never touch the session.
//
// HTTP status mapping: NotFoundError 404, ConflictError 409,
// ValidationError 422, ParseError 400.

#ifndef LAYOUTGRAPH_SERVICE_HPP_
#define LAYOUTGRAPH_SERVICE_HPP_

#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "layoutgraph/autocomplete.hpp"

namespace httplib {
class Server;
}

namespace lg {

inline constexpr int kDefaultPort = 8787;

// Rebuilds the GUI from its initial document and an event log.
// Throws ValidationError for an event that cannot apply.
Gui replay(const Gui& initial, const nlohmann::json& history);

// Hex FNV-1a of the canonical GUI document and the event log.
std::string state_hash(const Gui& gui, const nlohmann::json& history);

struct ServiceConfig {
  RefineConfig refine;
  ExtractionConfig ext;
  // When set, every event rewrites <snapshot_dir>/<session id>.json.
  std::string snapshot_dir;
};

class SessionManager {
 public:
  SessionManager(const TargetModel& model, ServiceConfig cfg = {}, nlohmann::json model_info = {});

  // Validates the GUI; returns the new session id.
  std::string create(const Gui& gui);
  // Loads every snapshot in the snapshot directory; returns the count.
  std::size_t restore();

  // {session_id, gui, pool, constraints, history, last_event, state_hash}
  nlohmann::json state(const std::string& id) const;
  // mode: single | group | all; target only with single.
  nlohmann::json suggest(const std::string& id, const std::string& mode,
                         const std::optional<std::string>& target) const;
  nlohmann::json preview(const std::string& id, const std::string& target) const;

  nlohmann::json add_element(const std::string& id, const Element& e, long last_event);
  nlohmann::json place(const std::string& id, const std::string& element_id, const BBox& bbox, long last_event);
  nlohmann::json undo(const std::string& id, long last_event);

  const nlohmann::json& model_info() const { return info_; }
  std::size_t size() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  nlohmann::json state_of(const Session& s) const;
  void append(Session& s, nlohmann::json event, long last_event);
  std::string fresh_id();

  const TargetModel& model_;
  ServiceConfig cfg_;
  nlohmann::json info_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// Registers the routes (and CORS headers) on server.
void mount_routes(httplib::Server& server, SessionManager& sessions);

}  // namespace lg

#endif  // LAYOUTGRAPH_SERVICE_HPP_
