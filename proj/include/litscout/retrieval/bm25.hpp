#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "litscout/evalkit/tokenize.hpp"
#include "litscout/retrieval/index.hpp"

namespace litscout::retrieval {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Robertson idf, floored at 0 so scores stay non-negative.
inline double bm25_idf(std::size_t n_docs, std::size_t doc_freq) {
  const double n = static_cast<double>(n_docs);
  const double df = static_cast<double>(doc_freq);
  return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

/// Per-document BM25 scores for `query_tokens` (repeated tokens count again),
/// plus a flag per document telling whether it shares any query token.
struct Bm25Scores {
  std::vector<double> score;
  std::vector<char> touched;
};

inline Bm25Scores bm25_scores(const CorpusIndex& index,
                              const std::vector<std::string>& query_tokens,
                              Bm25Params params = {}) {
  Bm25Scores out{std::vector<double>(index.size(), 0.0),
                 std::vector<char>(index.size(), 0)};
  const double avgdl = index.avg_doc_length();
  for (const auto& t : query_tokens) {
    const auto& list = index.postings(t);
    if (list.empty()) continue;
    const double idf = bm25_idf(index.size(), list.size());
    for (const auto& p : list) {
      const double tf = p.tf;
      const double norm =
          avgdl > 0.0 ? 1.0 - params.b + params.b * index.doc_length(p.doc) / avgdl : 1.0;
      out.score[p.doc] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
      out.touched[p.doc] = 1;
    }
  }
  return out;
}

struct SearchHit {
  std::size_t doc;
  double score;
};

/// Score desc (1e-9 resolution), citations desc (absent last), title key
/// asc, document number asc.
inline bool hit_before(const CorpusIndex& index, const SearchHit& a, const SearchHit& b) {
  const auto ka = std::llround(a.score * 1e9);
  const auto kb = std::llround(b.score * 1e9);
  if (ka != kb) return ka > kb;
  const auto ca = index.document(a.doc).citation_count.value_or(-1);
  const auto cb = index.document(b.doc).citation_count.value_or(-1);
  if (ca != cb) return ca > cb;
  const auto& ta = index.title_key(a.doc);
  const auto& tb = index.title_key(b.doc);
  if (ta != tb) return ta < tb;
  return a.doc < b.doc;
}

inline void sort_hits(const CorpusIndex& index, std::vector<SearchHit>& hits,
                      std::size_t top_k) {
  auto cmp = [&](const SearchHit& a, const SearchHit& b) { return hit_before(index, a, b); };
  if (hits.size() > top_k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(top_k),
                      hits.end(), cmp);
    hits.resize(top_k);
  } else {
    std::sort(hits.begin(), hits.end(), cmp);
  }
}

/// BM25 keyword search. Documents sharing no query token are excluded; an
/// empty token list yields no results.
inline std::vector<SearchHit> quick_search(const CorpusIndex& index,
                                           std::string_view query_text, std::size_t top_k,
                                           Bm25Params params = {}) {
  if (top_k == 0) throw InvalidValue("top_k must be positive");
  const auto tokens = evalkit::tokenize(query_text);
  if (tokens.empty() || index.empty()) return {};
  const auto s = bm25_scores(index, tokens, params);
  std::vector<SearchHit> hits;
  for (std::size_t d = 0; d < index.size(); ++d) {
    if (s.touched[d]) hits.push_back({d, s.score[d]});
  }
  sort_hits(index, hits, top_k);
  return hits;
}

}  // namespace litscout::retrieval
