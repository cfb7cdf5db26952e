#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "litscout/core/serialize.hpp"

namespace litscout::orchestrator {

enum class RunStatus { running, done, failed };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::running: return "running";
    case RunStatus::done: return "done";
    case RunStatus::failed: return "failed";
  }
  return "failed";
}

inline RunStatus run_status_from_string(std::string_view s) {
  for (auto v : {RunStatus::running, RunStatus::done, RunStatus::failed}) {
    if (s == to_string(v)) return v;
  }
  throw InvalidValue("unknown run status '" + std::string(s) + "'");
}

struct RunRecord {
  std::string run_id;
  int plan_version = 1;
  /// Completion order while running; result order once finished.
  std::vector<PaperVerdict> verdicts;
  Timestamp started;
  std::optional<Timestamp> finished;
  RunStatus status = RunStatus::running;
  bool degraded = false;
  json source_errors = json::array();
  std::optional<json> error;
};

struct SearchSession {
  std::string session_id;
  ResearchQuery query;
  std::vector<QueryPlan> plans;
  std::vector<RunRecord> runs;
  Timestamp created;
  Timestamp updated;
  /// Set when plan generation failed at creation.
  std::optional<json> error;

  const QueryPlan& latest_plan() const {
    if (plans.empty()) throw ConflictError("session " + session_id + " has no plan");
    return plans.back();
  }

  const RunRecord* find_run(std::string_view run_id) const {
    for (const auto& r : runs) {
      if (r.run_id == run_id) return &r;
    }
    return nullptr;
  }

  bool running() const {
    return std::any_of(runs.begin(), runs.end(),
                       [](const RunRecord& r) { return r.status == RunStatus::running; });
  }

  std::string status() const {
    if (error) return "failed";
    return running() ? "running" : "ready";
  }
};

inline json encode(const RunRecord& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(encode(v));
  return {{"run_id", r.run_id},
          {"plan_version", r.plan_version},
          {"verdicts", std::move(verdicts)},
          {"started", r.started.to_string()},
          {"finished", r.finished ? json(r.finished->to_string()) : json(nullptr)},
          {"status", std::string(to_string(r.status))},
          {"degraded", r.degraded},
          {"source_errors", r.source_errors},
          {"error", r.error ? *r.error : json(nullptr)}};
}

inline json encode(const SearchSession& s) {
  json plans = json::array();
  for (const auto& p : s.plans) plans.push_back(encode(p));
  json runs = json::array();
  for (const auto& r : s.runs) runs.push_back(encode(r));
  return {{"session_id", s.session_id},
          {"query", encode(s.query)},
          {"status", s.status()},
          {"plans", std::move(plans)},
          {"runs", std::move(runs)},
          {"created", s.created.to_string()},
          {"updated", s.updated.to_string()},
          {"error", s.error ? *s.error : json(nullptr)}};
}

// ---- events -----------------------------------------------------------------

namespace event {

inline json created(const std::string& session_id, const ResearchQuery& q, Timestamp at,
                    std::optional<json> error = std::nullopt) {
  return {{"type", "created"},
          {"at", at.to_string()},
          {"session_id", session_id},
          {"query", encode(q)},
          {"error", error ? *error : json(nullptr)}};
}

inline json plan_added(const QueryPlan& plan, Timestamp at) {
  return {{"type", "plan-added"}, {"at", at.to_string()}, {"plan", encode(plan)}};
}

inline json run_started(const std::string& run_id, int plan_version, Timestamp at) {
  return {{"type", "run-started"},
          {"at", at.to_string()},
          {"run_id", run_id},
          {"plan_version", plan_version}};
}

inline json verdict_appended(const std::string& run_id, const PaperVerdict& v, Timestamp at) {
  return {{"type", "verdict-appended"},
          {"at", at.to_string()},
          {"run_id", run_id},
          {"verdict", encode(v)}};
}

/// `order` lists paper ids in result order.
inline json run_finished(const std::string& run_id, RunStatus status,
                         const std::vector<std::string>& order, bool degraded,
                         json source_errors, std::optional<json> error, Timestamp at) {
  return {{"type", "run-finished"},
          {"at", at.to_string()},
          {"run_id", run_id},
          {"status", std::string(to_string(status))},
          {"order", order},
          {"degraded", degraded},
          {"source_errors", std::move(source_errors)},
          {"error", error ? *error : json(nullptr)}};
}

}  // namespace event

/// Folds events into a session. The first event creates it (`state` empty);
/// every later event must be consistent with the state so far.
inline void apply_event(std::optional<SearchSession>& state, const json& e) {
  const auto type = jsonio::get_string(e, "type");
  const auto at = Timestamp::parse(jsonio::get_string(e, "at"));
  if (type == "created") {
    if (state) throw InvalidValue("duplicate created event");
    std::optional<json> error;
    if (jsonio::present(e, "error")) error = e["error"];
    state = SearchSession{jsonio::get_string(e, "session_id"),
                          decode<ResearchQuery>(jsonio::require(e, "query")),
                          {}, {}, at, at, std::move(error)};
    return;
  }
  if (!state) throw InvalidValue("first event must be 'created'");
  auto& s = *state;
  s.updated = at;

  auto running_run = [&](const std::string& id) -> RunRecord& {
    for (auto& r : s.runs) {
      if (r.run_id == id) {
        if (r.status != RunStatus::running) throw InvalidValue("run " + id + " already finished");
        return r;
      }
    }
    throw InvalidValue("unknown run " + id);
  };

  if (type == "plan-added") {
    auto plan = decode<QueryPlan>(jsonio::require(e, "plan"));
    if (!s.plans.empty() && plan.version() <= s.plans.back().version()) {
      throw InvalidValue("plan version " + std::to_string(plan.version()) +
                         " does not increase");
    }
    s.plans.push_back(std::move(plan));
  } else if (type == "run-started") {
    RunRecord r;
    r.run_id = jsonio::get_string(e, "run_id");
    r.plan_version = static_cast<int>(jsonio::get_integer(e, "plan_version"));
    r.started = at;
    if (s.find_run(r.run_id)) throw InvalidValue("duplicate run " + r.run_id);
    if (s.running()) throw InvalidValue("run started while another is running");
    if (std::none_of(s.plans.begin(), s.plans.end(),
                     [&](const QueryPlan& p) { return p.version() == r.plan_version; })) {
      throw InvalidValue("run references missing plan version " +
                         std::to_string(r.plan_version));
    }
    s.runs.push_back(std::move(r));
  } else if (type == "verdict-appended") {
    auto& r = running_run(jsonio::get_string(e, "run_id"));
    auto v = decode<PaperVerdict>(jsonio::require(e, "verdict"));
    for (const auto& x : r.verdicts) {
      if (x.paper_id == v.paper_id) throw InvalidValue("duplicate verdict for " + v.paper_id);
    }
    r.verdicts.push_back(std::move(v));
  } else if (type == "run-finished") {
    auto& r = running_run(jsonio::get_string(e, "run_id"));
    const auto status = run_status_from_string(jsonio::get_string(e, "status"));
    if (status == RunStatus::running) throw InvalidValue("run-finished with status running");
    const auto order = jsonio::get_string_list(e, "order");
    if (order.size() != r.verdicts.size()) throw InvalidValue("order does not cover the verdicts");
    std::map<std::string, PaperVerdict*> by_id;
    for (auto& v : r.verdicts) by_id[v.paper_id] = &v;
    std::vector<PaperVerdict> sorted;
    for (const auto& id : order) {
      auto it = by_id.find(id);
      if (it == by_id.end() || it->second == nullptr) {
        throw InvalidValue("order names unknown or repeated paper " + id);
      }
      sorted.push_back(std::move(*it->second));
      it->second = nullptr;
    }
    r.verdicts = std::move(sorted);
    r.status = status;
    r.finished = at;
    r.degraded = jsonio::get_bool(e, "degraded");
    r.source_errors = jsonio::get_array(e, "source_errors");
    if (jsonio::present(e, "error")) r.error = e["error"];
  } else {
    throw InvalidValue("unknown event type '" + type + "'");
  }
}

}  // namespace litscout::orchestrator
