#pragma once

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "litscout/orchestrator/store.hpp"
#include "litscout/planner/edits.hpp"
#include "litscout/planner/plan.hpp"
#include "litscout/retrieval/deep.hpp"
#include "litscout/validator/pipeline.hpp"

namespace litscout::orchestrator {

struct ManagerOptions {
  validator::ScoringConfig scoring;
  retrieval::RetrievalLimits limits;
  std::function<Timestamp()> clock = [] { return Timestamp::now(); };
};

/// Sessions over an EventStore. Writes to one session are serialized; a
/// session admits one run at a time and rejects edits while it runs.
// TODO: mark runs left "running" by a crashed process as failed; today such a
// session refuses new runs and edits until its log is repaired.
class SessionManager {
 public:
  SessionManager(std::shared_ptr<EventStore> store, std::shared_ptr<llmgate::Backend> backend,
                 std::shared_ptr<const retrieval::CorpusIndex> corpus,
                 ManagerOptions options = {},
                 std::vector<std::shared_ptr<retrieval::ExternalSource>> sources = {})
      : store_(std::move(store)),
        backend_(std::move(backend)),
        corpus_(std::move(corpus)),
        options_(std::move(options)),
        sources_(std::move(sources)) {
    options_.scoring.validate();
    options_.limits.validate();
  }

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  ~SessionManager() { join_workers(); }

  const retrieval::CorpusIndex& corpus() const { return *corpus_; }
  EventStore& store() { return *store_; }

  /// Generates plan version 1. A generation failure still creates the
  /// session, in the failed state, carrying the error.
  SearchSession create_session(const ResearchQuery& query) {
    const auto id = new_session_id();
    std::optional<QueryPlan> plan;
    std::optional<json> error;
    try {
      plan = planner::generate_plan(query, *backend_);
    } catch (const std::exception& e) {
      error = error_body(e)["error"];
    }
    {
      std::lock_guard lock(guard(id));
      store_->append(id, event::created(id, query, now(), error));
      if (plan) store_->append(id, event::plan_added(*plan, now()));
    }
    notify();
    return store_->load(id);
  }

  SearchSession get(std::string_view session_id) const { return store_->snapshot(session_id); }

  QueryPlan edit_criteria(std::string_view session_id,
                          const std::vector<planner::EditCommand>& edits) {
    QueryPlan next = [&] {
      std::lock_guard lock(guard(session_id));
      const auto s = store_->load(session_id);
      if (s.running()) throw ConflictError("session " + s.session_id + " has a run in progress");
      auto plan = planner::apply_edits(s.latest_plan(), edits);
      store_->append(session_id, event::plan_added(plan, now()));
      return plan;
    }();
    notify();
    return next;
  }

  /// Records a new run and executes it on a background thread.
  RunRecord start_run(std::string_view session_id,
                      std::optional<retrieval::RetrievalLimits> limits = std::nullopt) {
    const auto lim = limits.value_or(options_.limits);
    lim.validate();
    std::string run_id;
    QueryPlan plan = [&] {
      std::lock_guard lock(guard(session_id));
      const auto s = store_->load(session_id);
      if (s.running()) throw ConflictError("session " + s.session_id + " has a run in progress");
      const auto& p = s.latest_plan();
      run_id = "r" + std::to_string(s.runs.size() + 1);
      store_->append(session_id, event::run_started(run_id, p.version(), now()));
      return p;
    }();
    notify();
    std::string sid(session_id);
    {
      std::lock_guard lock(workers_mutex_);
      workers_.emplace_back([this, sid, run_id, plan, lim] { execute(sid, run_id, plan, lim); });
    }
    return *get(session_id).find_run(run_id);
  }

  /// Blocks until the run leaves the running state.
  RunRecord wait_run(std::string_view session_id, std::string_view run_id) {
    for (;;) {
      const auto gen = generation();
      const auto s = get(session_id);
      const auto* r = s.find_run(run_id);
      if (!r) throw NotFoundError("no run '" + std::string(run_id) + "'");
      if (r->status != RunStatus::running) return *r;
      wait_change(gen, std::chrono::milliseconds(200));
    }
  }

  RunRecord run_search(std::string_view session_id,
                       std::optional<retrieval::RetrievalLimits> limits = std::nullopt) {
    const auto started = start_run(session_id, limits);
    return wait_run(session_id, started.run_id);
  }

  /// Change counter bumped after every appended event.
  std::uint64_t generation() const {
    std::lock_guard lock(change_mutex_);
    return generation_;
  }

  /// Waits until generation() differs from `seen` or the timeout passes.
  void wait_change(std::uint64_t seen, std::chrono::milliseconds timeout) const {
    std::unique_lock lock(change_mutex_);
    change_cv_.wait_for(lock, timeout, [&] { return generation_ != seen; });
  }

  void join_workers() {
    std::vector<std::thread> ws;
    {
      std::lock_guard lock(workers_mutex_);
      ws.swap(workers_);
    }
    for (auto& t : ws) {
      if (t.joinable()) t.join();
    }
  }

 private:
  Timestamp now() const { return options_.clock(); }

  void notify() {
    {
      std::lock_guard lock(change_mutex_);
      ++generation_;
    }
    change_cv_.notify_all();
  }

  std::mutex& guard(std::string_view session_id) {
    std::lock_guard lock(guards_mutex_);
    auto& m = guards_[std::string(session_id)];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
  }

  void execute(const std::string& sid, const std::string& run_id, const QueryPlan& plan,
               const retrieval::RetrievalLimits& limits) {
    RunStatus status = RunStatus::done;
    std::vector<std::string> order;
    bool degraded = false;
    json source_errors = json::array();
    std::optional<json> error;
    try {
      std::vector<retrieval::ExternalSource*> sources;
      for (const auto& s : sources_) sources.push_back(s.get());
      const auto candidates = retrieval::deep_retrieve(*corpus_, plan, limits, sources);
      degraded = candidates.degraded;
      for (const auto& f : candidates.source_errors) source_errors.push_back(retrieval::encode(f));
      const auto verdicts = validator::validate_candidates(
          plan, candidates.papers, *backend_, options_.scoring, [&](const PaperVerdict& v) {
            store_->append(sid, event::verdict_appended(run_id, v, now()));
            notify();
          });
      for (const auto& v : verdicts) order.push_back(v.paper_id);
      const bool all_failed =
          !verdicts.empty() &&
          std::all_of(verdicts.begin(), verdicts.end(), [](const PaperVerdict& v) { return v.error; });
      if (all_failed) {
        status = RunStatus::failed;
        error = json{{"code", "backend"}, {"message", "validation failed for every candidate"}};
      }
    } catch (const std::exception& e) {
      status = RunStatus::failed;
      error = error_body(e)["error"];
      order.clear();
      // Keep the verdicts that did arrive, in completion order.
      try {
        for (const auto& v : store_->snapshot(sid).find_run(run_id)->verdicts) {
          order.push_back(v.paper_id);
        }
      } catch (const std::exception&) {
      }
    }
    {
      std::lock_guard lock(guard(sid));
      store_->append(sid, event::run_finished(run_id, status, order, degraded,
                                              std::move(source_errors), error, now()));
    }
    notify();
  }

  std::shared_ptr<EventStore> store_;
  std::shared_ptr<llmgate::Backend> backend_;
  std::shared_ptr<const retrieval::CorpusIndex> corpus_;
  ManagerOptions options_;
  std::vector<std::shared_ptr<retrieval::ExternalSource>> sources_;

  std::mutex guards_mutex_;
  std::unordered_map<std::string, std::unique_ptr<std::mutex>> guards_;

  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;

  mutable std::mutex change_mutex_;
  mutable std::condition_variable change_cv_;
  std::uint64_t generation_ = 0;
};

}  // namespace litscout::orchestrator
