#pragma once

#include <string>
#include <string_view>

#include "litscout/boolquery/ast.hpp"
#include "litscout/core/error.hpp"

namespace litscout::boolquery {

/// canonical: fully parenthesized, explicit AND/OR, quoted phrases.
/// plain: operators and quotes dropped, all words space-joined, for
/// keyword-only sources.
enum class Dialect { canonical, plain };

inline std::string_view to_string(Dialect d) {
  return d == Dialect::canonical ? "canonical" : "plain";
}

inline Dialect dialect_from_string(std::string_view s) {
  if (s == "canonical") return Dialect::canonical;
  if (s == "plain") return Dialect::plain;
  throw ConfigurationError("unknown query dialect '" + std::string(s) + "'");
}

namespace detail {

inline void render_into(const Query& q, Dialect d, std::string& out) {
  if (q.is<Term>()) {
    out += q.as<Term>().word;
    return;
  }
  if (q.is<Phrase>()) {
    const auto& words = q.as<Phrase>().words;
    if (d == Dialect::canonical) out += '"';
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (i) out += ' ';
      out += words[i];
    }
    if (d == Dialect::canonical) out += '"';
    return;
  }
  const bool is_and = q.is<And>();
  const auto& kids = is_and ? q.as<And>().children : q.as<Or>().children;
  const std::string_view sep =
      d == Dialect::plain ? " " : (is_and ? " AND " : " OR ");
  if (d == Dialect::canonical) out += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += sep;
    render_into(kids[i], d, out);
  }
  if (d == Dialect::canonical) out += ')';
}

}  // namespace detail

inline std::string render(const Query& q, Dialect dialect = Dialect::canonical) {
  std::string out;
  detail::render_into(q, dialect, out);
  return out;
}

}  // namespace litscout::boolquery
