#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "litscout/boolquery/ast.hpp"
#include "litscout/core/types.hpp"
#include "litscout/evalkit/tokenize.hpp"

namespace litscout::boolquery {

namespace detail {

inline bool contains_run(std::span<const std::string> haystack,
                         std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace detail

/// Text a document is matched against: title followed by abstract.
inline std::vector<std::string> document_tokens(const PaperMetadata& doc) {
  return evalkit::tokenize(doc.title + "\n" + doc.abstract);
}

/// Token sequences a leaf must find contiguously. A term such as "COVID-19"
/// tokenizes to several tokens and is matched like a phrase; a leaf with no
/// indexable characters matches nothing.
inline std::vector<std::string> leaf_tokens(const Query& q) {
  if (q.is<Term>()) return evalkit::tokenize(q.as<Term>().word);
  const auto& words = q.as<Phrase>().words;
  std::string joined;
  for (const auto& w : words) {
    joined += w;
    joined += ' ';
  }
  return evalkit::tokenize(joined);
}

/// Boolean evaluation over an already tokenized document.
inline bool match_tokens(const Query& q, std::span<const std::string> doc) {
  if (q.is<Term>() || q.is<Phrase>()) {
    return detail::contains_run(doc, leaf_tokens(q));
  }
  if (q.is<And>()) {
    const auto& kids = q.as<And>().children;
    return std::all_of(kids.begin(), kids.end(),
                       [&](const Query& k) { return match_tokens(k, doc); });
  }
  const auto& kids = q.as<Or>().children;
  return std::any_of(kids.begin(), kids.end(),
                     [&](const Query& k) { return match_tokens(k, doc); });
}

/// Case-insensitive Boolean match against title + abstract.
inline bool match_document(const Query& q, const PaperMetadata& doc) {
  const auto tokens = document_tokens(doc);
  return match_tokens(q, tokens);
}

/// Every distinct token any leaf of `q` needs; a matching document contains
/// at least one of them.
inline std::vector<std::string> query_tokens(const Query& q) {
  std::vector<std::string> out;
  auto visit = [&](auto&& self, const Query& node) -> void {
    if (node.is<Term>() || node.is<Phrase>()) {
      for (auto& t : leaf_tokens(node)) out.push_back(std::move(t));
    } else {
      const auto& kids =
          node.is<And>() ? node.as<And>().children : node.as<Or>().children;
      for (const auto& k : kids) self(self, k);
    }
  };
  visit(visit, q);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace litscout::boolquery
