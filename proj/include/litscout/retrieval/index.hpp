#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "litscout/boolquery/match.hpp"
#include "litscout/core/paper_key.hpp"
#include "litscout/core/serialize.hpp"

namespace litscout::retrieval {

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Immutable inverted index over title + abstract tokens.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  explicit CorpusIndex(std::vector<PaperMetadata> documents)
      : documents_(std::move(documents)) {
    std::set<std::string> ids;
    std::uint64_t total = 0;
    tokens_.reserve(documents_.size());
    for (std::uint32_t d = 0; d < documents_.size(); ++d) {
      const auto& doc = documents_[d];
      doc.validate();
      if (!ids.insert(doc.paper_id).second) {
        throw InvalidValue("duplicate paper_id '" + doc.paper_id + "'");
      }
      tokens_.push_back(boolquery::document_tokens(doc));
      title_keys_.push_back(normalized_title(doc));
      const auto& toks = tokens_.back();
      doc_lengths_.push_back(static_cast<std::uint32_t>(toks.size()));
      total += toks.size();
      std::map<std::string_view, std::uint32_t> tf;
      for (const auto& t : toks) ++tf[t];
      for (const auto& [term, n] : tf) postings_[std::string(term)].push_back({d, n});
    }
    avg_doc_length_ = documents_.empty()
                          ? 0.0
                          : static_cast<double>(total) / static_cast<double>(documents_.size());
    total_tokens_ = total;
  }

  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const std::vector<PaperMetadata>& documents() const noexcept { return documents_; }
  const PaperMetadata& document(std::size_t d) const { return documents_.at(d); }
  const std::vector<std::string>& tokens(std::size_t d) const { return tokens_.at(d); }
  const std::string& title_key(std::size_t d) const { return title_keys_.at(d); }
  std::uint32_t doc_length(std::size_t d) const { return doc_lengths_.at(d); }
  double avg_doc_length() const noexcept { return avg_doc_length_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }

  /// Postings sorted by document number; empty for unknown terms.
  const std::vector<Posting>& postings(const std::string& term) const {
    static const std::vector<Posting> none;
    auto it = postings_.find(term);
    return it == postings_.end() ? none : it->second;
  }

  std::size_t vocabulary_size() const noexcept { return postings_.size(); }

  /// Key-sorted dump of every index structure, for determinism checks.
  std::string canonical_dump() const {
    json terms = json::object();
    for (const auto& [term, list] : postings_) {
      json arr = json::array();
      for (const auto& p : list) arr.push_back({p.doc, p.tf});
      terms[term] = std::move(arr);
    }
    return json{{"documents", encode(documents_)},
                {"doc_lengths", doc_lengths_},
                {"avg_doc_length", avg_doc_length_},
                {"postings", std::move(terms)}}
        .dump();
  }

 private:
  std::vector<PaperMetadata> documents_;
  std::vector<std::vector<std::string>> tokens_;
  std::vector<std::string> title_keys_;
  std::vector<std::uint32_t> doc_lengths_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  double avg_doc_length_ = 0.0;
  std::uint64_t total_tokens_ = 0;
};

struct RejectedLine {
  std::size_t line;  // 1-based
  std::string reason;
};

struct IngestStats {
  std::size_t docs = 0;
  std::uint64_t tokens = 0;
  std::vector<RejectedLine> rejected;

  std::size_t rejected_lines() const noexcept { return rejected.size(); }
};

struct IngestResult {
  CorpusIndex index;
  IngestStats stats;
};

/// One PaperMetadata per non-blank line. Malformed lines are skipped and
/// reported; a record without paper_id is given "L<line>".
inline IngestResult ingest_jsonl(std::istream& in) {
  std::vector<PaperMetadata> docs;
  IngestStats stats;
  std::set<std::string> ids;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (unicode::trim_ascii(line).empty()) continue;
    try {
      json j = json::parse(line);
      if (!j.is_object()) throw InvalidValue("record is not a JSON object");
      if (!jsonio::present(j, "paper_id") ||
          (j["paper_id"].is_string() && j["paper_id"].get<std::string>().empty())) {
        j["paper_id"] = "L" + std::to_string(n);
      }
      auto p = decode<PaperMetadata>(j);
      if (!ids.insert(p.paper_id).second) {
        throw InvalidValue("duplicate paper_id '" + p.paper_id + "'");
      }
      docs.push_back(std::move(p));
    } catch (const json::parse_error& e) {
      stats.rejected.push_back({n, std::string("malformed JSON: ") + e.what()});
    } catch (const std::exception& e) {
      stats.rejected.push_back({n, e.what()});
    }
  }
  if (docs.empty()) throw IngestionError("corpus contains no valid records");
  IngestResult out{CorpusIndex(std::move(docs)), std::move(stats)};
  out.stats.docs = out.index.size();
  out.stats.tokens = out.index.total_tokens();
  return out;
}

inline IngestResult ingest_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read corpus file '" + path + "'");
  return ingest_jsonl(in);
}

inline void write_jsonl(std::ostream& out, const std::vector<PaperMetadata>& docs) {
  for (const auto& d : docs) out << canonical_serialize(d) << '\n';
}

}  // namespace litscout::retrieval
