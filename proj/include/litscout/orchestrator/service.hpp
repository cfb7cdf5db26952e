#pragma once

#include <memory>
#include <set>
#include <string>

#include <httplib.h>

#include "litscout/orchestrator/manager.hpp"

namespace litscout::orchestrator {

inline int http_status(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return 500;
  switch (err->code()) {
    case ErrorCode::invalid_value:
    case ErrorCode::query_parse: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::edit:
    case ErrorCode::validation: return 422;
    case ErrorCode::rate_limited: return 429;
    case ErrorCode::retryable:
    case ErrorCode::source: return 502;
    default: return 500;
  }
}

inline std::string sse_event(std::string_view name, const json& data) {
  return "event: " + std::string(name) + "\ndata: " + data.dump() + "\n\n";
}

/// HTTP front end over a SessionManager. Bodies are canonical JSON.
class Service {
 public:
  explicit Service(SessionManager& manager) : manager_(manager) { routes(); }

  httplib::Server& server() { return server_; }

  int bind_any(const std::string& host = "127.0.0.1") { return server_.bind_to_any_port(host); }
  bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  using Req = httplib::Request;
  using Res = httplib::Response;

  static void reply(Res& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  template <typename F>
  static httplib::Server::Handler guarded(F f) {
    return [f](const Req& req, Res& res) {
      try {
        f(req, res);
      } catch (const json::exception& e) {
        reply(res, 400, error_body(InvalidValue(std::string("malformed request body: ") + e.what())));
      } catch (const std::exception& e) {
        reply(res, http_status(e), error_body(e));
      }
    };
  }

  static json parse_body(const Req& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
  }

  void routes() {
    server_.Post("/sessions", guarded([this](const Req& req, Res& res) {
      const auto body = parse_body(req);
      const auto text = jsonio::present(body, "query") ? jsonio::get_string(body, "query")
                                                       : jsonio::get_string(body, "text");
      const auto ts = jsonio::get_opt_string(body, "timestamp");
      const ResearchQuery q(text, ts ? Timestamp::parse(*ts) : Timestamp::now(),
                            jsonio::get_opt_string(body, "language_hint"));
      reply(res, 201, encode(manager_.create_session(q)));
    }));

    server_.Get(R"(/sessions/([^/]+))", guarded([this](const Req& req, Res& res) {
      reply(res, 200, encode(manager_.get(req.matches[1].str())));
    }));

    server_.Patch(R"(/sessions/([^/]+)/criteria)", guarded([this](const Req& req, Res& res) {
      const auto id = req.matches[1].str();
      manager_.get(id);  // 404 before body errors
      auto body = parse_body(req);
      if (body.is_object() && body.contains("edits")) body = body["edits"];
      const auto plan = manager_.edit_criteria(id, planner::decode_edits(body));
      reply(res, 200, {{"plan", encode(plan)}, {"session", encode(manager_.get(id))}});
    }));

    server_.Post(R"(/sessions/([^/]+)/runs)", guarded([this](const Req& req, Res& res) {
      const auto id = req.matches[1].str();
      manager_.get(id);
      const auto body = parse_body(req);
      std::optional<retrieval::RetrievalLimits> limits;
      if (jsonio::present(body, "max_candidates") || jsonio::present(body, "per_query_cap")) {
        retrieval::RetrievalLimits l;
        if (jsonio::present(body, "max_candidates")) {
          l.max_candidates = static_cast<std::size_t>(jsonio::get_integer(body, "max_candidates"));
        }
        if (jsonio::present(body, "per_query_cap")) {
          l.per_query_cap = static_cast<std::size_t>(jsonio::get_integer(body, "per_query_cap"));
        }
        limits = l;
      }
      reply(res, 202, encode(manager_.start_run(id, limits)));
    }));

    server_.Get(R"(/sessions/([^/]+)/runs/([^/]+))", guarded([this](const Req& req, Res& res) {
      reply(res, 200, encode(find_run(req.matches[1].str(), req.matches[2].str())));
    }));

    server_.Get(R"(/sessions/([^/]+)/runs/([^/]+)/events)",
                guarded([this](const Req& req, Res& res) { stream(req, res); }));

    server_.Get("/search/quick", guarded([this](const Req& req, Res& res) {
      if (!req.has_param("q")) throw InvalidValue("missing parameter q");
      std::size_t k = 10;
      if (req.has_param("k")) {
        const auto text = req.get_param_value("k");
        std::size_t used = 0;
        long long v = 0;
        try {
          v = std::stoll(text, &used);
        } catch (const std::exception&) {
        }
        if (used != text.size() || v < 1) throw InvalidValue("k must be a positive integer");
        k = static_cast<std::size_t>(v);
      }
      const auto& index = manager_.corpus();
      json results = json::array();
      for (const auto& h : retrieval::quick_search(index, req.get_param_value("q"), k)) {
        results.push_back({{"score", h.score}, {"paper", encode(index.document(h.doc))}});
      }
      reply(res, 200, {{"results", std::move(results)}});
    }));

    server_.Get(R"(/papers/(.+))", guarded([this](const Req& req, Res& res) {
      const auto id = req.matches[1].str();
      for (const auto& p : manager_.corpus().documents()) {
        if (p.paper_id == id) return reply(res, 200, encode(p));
      }
      throw NotFoundError("no paper '" + id + "'");
    }));
  }

  RunRecord find_run(const std::string& sid, const std::string& rid) const {
    const auto s = manager_.get(sid);
    const auto* r = s.find_run(rid);
    if (!r) throw NotFoundError("no run '" + rid + "' in session " + sid);
    return *r;
  }

  /// One `verdict` event per paper as it completes, then `done`. A client
  /// joining late first receives the verdicts recorded so far.
  void stream(const Req& req, Res& res) {
    const auto sid = req.matches[1].str();
    const auto rid = req.matches[2].str();
    find_run(sid, rid);
    auto sent = std::make_shared<std::set<std::string>>();
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, sid, rid, sent](std::size_t, httplib::DataSink& sink) {
          const auto gen = manager_.generation();
          RunRecord run;
          try {
            run = find_run(sid, rid);
          } catch (const std::exception& e) {
            const std::string msg = sse_event("error", error_body(e));
            sink.write(msg.data(), msg.size());
            sink.done();
            return true;
          }
          for (const auto& v : run.verdicts) {
            if (!sent->insert(v.paper_id).second) continue;
            const auto msg = sse_event("verdict", encode(v));
            if (!sink.write(msg.data(), msg.size())) return false;
          }
          if (run.status != RunStatus::running) {
            const auto msg = sse_event("done", {{"run_id", run.run_id},
                                                {"status", std::string(to_string(run.status))},
                                                {"count", run.verdicts.size()},
                                                {"degraded", run.degraded}});
            sink.write(msg.data(), msg.size());
            sink.done();
            return true;
          }
          if (!sink.is_writable()) return false;
          manager_.wait_change(gen, std::chrono::milliseconds(500));
          return true;
        });
  }

  SessionManager& manager_;
  httplib::Server server_;
};

}  // namespace litscout::orchestrator
