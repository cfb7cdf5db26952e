#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "litscout/boolquery/render.hpp"
#include "litscout/core/paper_key.hpp"
#include "litscout/core/serialize.hpp"
#include "litscout/llmgate/remote.hpp"

namespace litscout::retrieval {

struct FetchResult {
  std::vector<PaperMetadata> papers;
  /// One message per record that could not be mapped.
  std::vector<std::string> warnings;
};

/// A searchable scholarly source. Failures are reported by throwing
/// SourceError or RateLimitedError.
class ExternalSource {
 public:
  virtual ~ExternalSource() = default;
  virtual const std::string& name() const = 0;
  virtual FetchResult search(const boolquery::Query& query) = 0;
};

/// Token bucket holding up to `capacity` requests, refilled continuously at
/// `per_minute` tokens per minute.
class TokenBucket {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  TokenBucket(double per_minute, double capacity,
              Clock clock = [] { return std::chrono::steady_clock::now(); })
      : rate_per_ms_(per_minute / 60000.0),
        capacity_(capacity),
        tokens_(capacity),
        clock_(std::move(clock)),
        last_(clock_()) {
    if (!(per_minute > 0.0) || !(capacity >= 1.0)) {
      throw ConfigurationError("rate limit must be positive with capacity >= 1");
    }
  }

  /// Takes one token, or returns how long until one is available.
  std::optional<std::chrono::milliseconds> try_acquire() {
    std::lock_guard lock(mutex_);
    refill();
    if (tokens_ >= 1.0) {
      tokens_ -= 1.0;
      return std::nullopt;
    }
    const double wait_ms = std::ceil((1.0 - tokens_) / rate_per_ms_);
    return std::chrono::milliseconds(static_cast<long long>(wait_ms));
  }

 private:
  void refill() {
    const auto now = clock_();
    const double elapsed =
        std::chrono::duration<double, std::milli>(now - last_).count();
    if (elapsed > 0) {
      tokens_ = std::min(capacity_, tokens_ + elapsed * rate_per_ms_);
      last_ = now;
    }
  }

  double rate_per_ms_;
  double capacity_;
  double tokens_;
  Clock clock_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mutex_;
};

struct SourceDescriptor {
  std::string name;
  std::string endpoint;
  boolquery::Dialect dialect = boolquery::Dialect::plain;
  double requests_per_minute = 60.0;
  double burst = 5.0;
  std::chrono::milliseconds timeout{10'000};
  std::size_t max_results = 50;
};

namespace detail {

inline const json* first_of(const json& j, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = j.find(k);
    if (it != j.end() && !it->is_null()) return &*it;
  }
  return nullptr;
}

inline std::vector<std::string> names(const json& v) {
  std::vector<std::string> out;
  if (v.is_string()) {
    out.push_back(v.get<std::string>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (x.is_string()) {
        out.push_back(x.get<std::string>());
      } else if (x.is_object()) {
        if (auto* n = first_of(x, {"name", "display_name"}); n && n->is_string()) {
          out.push_back(n->get<std::string>());
        }
      }
    }
  }
  return out;
}

inline std::string text_of(const json* v) {
  return v && v->is_string() ? v->get<std::string>() : std::string();
}

}  // namespace detail

/// Maps a source record onto PaperMetadata. Common field spellings are
/// accepted; unknown fields are dropped. Throws InvalidValue when the record
/// cannot be used (not an object, no title).
inline PaperMetadata map_record(const json& r, const std::string& source_name) {
  using detail::first_of;
  if (!r.is_object()) throw InvalidValue("record is not an object");
  PaperMetadata p;
  p.title = unicode::trim_ascii(detail::text_of(first_of(r, {"title", "display_name"})));
  if (auto* doi = first_of(r, {"doi", "DOI"}); doi && doi->is_string()) {
    p.doi = doi->get<std::string>();
  } else if (auto* ext = first_of(r, {"externalIds", "external_ids"}); ext && ext->is_object()) {
    if (auto* d = first_of(*ext, {"DOI", "doi"}); d && d->is_string()) p.doi = d->get<std::string>();
  }
  if (auto* a = first_of(r, {"authors", "author"})) p.authors = detail::names(*a);
  if (auto* a = first_of(r, {"affiliations"})) p.affiliations = detail::names(*a);
  p.venue = detail::text_of(first_of(r, {"venue", "journal", "conference_journal"}));
  p.venue_type = detail::text_of(first_of(r, {"venue_type", "publication_type"}));
  if (auto* f = first_of(r, {"research_fields", "fieldsOfStudy", "fields"})) {
    p.research_fields = detail::names(*f);
  }
  if (auto* d = first_of(r, {"publication_date", "publicationDate"}); d && d->is_string()) {
    try {
      p.publication_date = Date::parse(d->get<std::string>());
    } catch (const InvalidValue&) {
    }
  }
  p.abstract = detail::text_of(first_of(r, {"abstract"}));
  if (auto* c = first_of(r, {"citation_count", "citationCount", "cited_by_count"});
      c && c->is_number_integer() && c->get<std::int64_t>() >= 0) {
    p.citation_count = c->get<std::int64_t>();
  }
  if (auto* u = first_of(r, {"source_url", "url"}); u && u->is_string()) {
    p.source_url = u->get<std::string>();
  }
  std::string id = detail::text_of(first_of(r, {"paper_id", "paperId", "id"}));
  if (id.empty() && r.contains("id") && r["id"].is_number_integer()) {
    id = std::to_string(r["id"].get<std::int64_t>());
  }
  if (id.empty()) id = normalize_paper_key(p);
  p.paper_id = source_name + ":" + id;
  p.validate();
  return p;
}

/// Extracts the record array from a response body: a bare array or an object
/// holding one under results/data/papers/items.
inline FetchResult parse_source_response(const std::string& body,
                                         const std::string& source_name) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw SourceError(source_name, std::string("malformed response: ") + e.what());
  }
  const json* records = nullptr;
  if (j.is_array()) {
    records = &j;
  } else if (j.is_object()) {
    records = detail::first_of(j, {"results", "data", "papers", "items"});
  }
  if (records == nullptr || !records->is_array()) {
    throw SourceError(source_name, "response holds no record array");
  }
  FetchResult out;
  for (std::size_t i = 0; i < records->size(); ++i) {
    try {
      out.papers.push_back(map_record((*records)[i], source_name));
    } catch (const std::exception& e) {
      out.warnings.push_back("record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

/// JSON search API reached with GET <endpoint>?q=<rendered query>&limit=<n>.
class HttpSource final : public ExternalSource {
 public:
  explicit HttpSource(SourceDescriptor d, TokenBucket::Clock clock = {})
      : desc_(std::move(d)),
        bucket_(desc_.requests_per_minute, desc_.burst,
                clock ? std::move(clock)
                      : TokenBucket::Clock([] { return std::chrono::steady_clock::now(); })),
        url_(llmgate::split_url(desc_.endpoint, "/")) {
    if (desc_.name.empty()) throw ConfigurationError("source name is empty");
  }

  const std::string& name() const override { return desc_.name; }

  FetchResult search(const boolquery::Query& query) override {
    if (auto wait = bucket_.try_acquire()) throw RateLimitedError(desc_.name, *wait);
    httplib::Client client(url_.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(desc_.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(desc_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    const httplib::Params params = {{"q", boolquery::render(query, desc_.dialect)},
                                    {"limit", std::to_string(desc_.max_results)}};
    auto res = client.Get(url_.path, params, httplib::Headers{});
    if (!res) {
      throw SourceError(desc_.name, "transport error: " + httplib::to_string(res.error()));
    }
    if (res->status == 429) {
      long long after = 1000;
      try {
        after = std::stoll(res->get_header_value("Retry-After")) * 1000;
      } catch (const std::exception&) {
      }
      throw RateLimitedError(desc_.name, std::chrono::milliseconds(after));
    }
    if (res->status < 200 || res->status >= 300) {
      throw SourceError(desc_.name, "HTTP " + std::to_string(res->status));
    }
    return parse_source_response(res->body, desc_.name);
  }

 private:
  SourceDescriptor desc_;
  TokenBucket bucket_;
  llmgate::SplitUrl url_;
};

/// One-shot search against a source.
inline FetchResult fetch_external(const boolquery::Query& query, ExternalSource& source) {
  return source.search(query);
}

}  // namespace litscout::retrieval
