#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "litscout/boolquery/match.hpp"
#include "litscout/boolquery/render.hpp"
#include "litscout/retrieval/bm25.hpp"
#include "litscout/retrieval/source.hpp"

namespace litscout::retrieval {

struct RetrievalLimits {
  std::size_t max_candidates = 100;
  std::size_t per_query_cap = 50;

  void validate() const {
    if (max_candidates < 1 || per_query_cap < 1) {
      throw InvalidValue("retrieval limits must be positive");
    }
    if (per_query_cap > max_candidates) {
      throw InvalidValue("per_query_cap must not exceed max_candidates");
    }
  }
};

struct SourceFailure {
  std::string source;
  std::string message;
  std::optional<std::chrono::milliseconds> retry_after;
};

inline json encode(const SourceFailure& f) {
  return {{"source", f.source},
          {"message", f.message},
          {"retry_after_ms", f.retry_after ? json(f.retry_after->count()) : json(nullptr)}};
}

struct Candidates {
  std::vector<PaperMetadata> papers;
  bool degraded = false;
  std::vector<SourceFailure> source_errors;
  std::vector<std::string> warnings;
};

/// Local documents matching `q`, best BM25 first (scored on the plain
/// rendering), at most `cap`.
inline std::vector<std::size_t> local_matches(const CorpusIndex& index,
                                              const boolquery::Query& q, std::size_t cap) {
  const auto tokens = boolquery::query_tokens(q);
  // Any matching document holds at least one query token.
  std::vector<char> seen(index.size(), 0);
  std::vector<std::size_t> pool;
  for (const auto& t : tokens) {
    for (const auto& p : index.postings(t)) {
      if (!seen[p.doc]) {
        seen[p.doc] = 1;
        pool.push_back(p.doc);
      }
    }
  }
  const auto scores =
      bm25_scores(index, evalkit::tokenize(boolquery::render(q, boolquery::Dialect::plain)));
  std::vector<SearchHit> hits;
  for (auto d : pool) {
    if (boolquery::match_tokens(q, index.tokens(d))) hits.push_back({d, scores.score[d]});
  }
  sort_hits(index, hits, cap);
  std::vector<std::size_t> out;
  for (const auto& h : hits) out.push_back(h.doc);
  return out;
}

/// Executes every plan query against the local index and any external
/// sources, then merges by normalize_paper_key. Order is first-seen (query
/// index, then local rank, then sources in order); a later duplicate with
/// more filled fields replaces the record in place.
inline Candidates deep_retrieve(const CorpusIndex& index, const QueryPlan& plan,
                                const RetrievalLimits& limits = {},
                                const std::vector<ExternalSource*>& sources = {}) {
  limits.validate();
  Candidates out;
  std::unordered_map<std::string, std::size_t> position;
  auto offer = [&](const PaperMetadata& p) {
    const auto key = normalize_paper_key(p);
    auto it = position.find(key);
    if (it != position.end()) {
      if (p.filled_fields() > out.papers[it->second].filled_fields()) {
        out.papers[it->second] = p;
      }
      return;
    }
    if (out.papers.size() >= limits.max_candidates) return;
    position.emplace(key, out.papers.size());
    out.papers.push_back(p);
  };

  for (const auto& q : plan.search_queries()) {
    for (auto d : local_matches(index, q, limits.per_query_cap)) offer(index.document(d));
    for (auto* source : sources) {
      try {
        auto fetched = source->search(q);
        if (fetched.papers.size() > limits.per_query_cap) {
          fetched.papers.resize(limits.per_query_cap);
        }
        for (const auto& p : fetched.papers) offer(p);
        for (auto& w : fetched.warnings) out.warnings.push_back(source->name() + ": " + w);
      } catch (const RateLimitedError& e) {
        out.degraded = true;
        out.source_errors.push_back({source->name(), e.what(), e.retry_after()});
      } catch (const std::exception& e) {
        out.degraded = true;
        out.source_errors.push_back({source->name(), e.what(), std::nullopt});
      }
    }
  }
  return out;
}

}  // namespace litscout::retrieval
