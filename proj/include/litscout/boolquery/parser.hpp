#pragma once

// Grammar (EBNF), whitespace separated:
//
//   query    = or_expr ;
//   or_expr  = and_expr , { "OR" , and_expr } ;
//   and_expr = primary , { [ "AND" ] , primary } ;     (adjacency = AND)
//   primary  = phrase | term | "(" , or_expr , ")" ;
//   phrase   = '"' , word , { ws , word } , '"' ;
//   term     = word - ( "AND" | "OR" ) ;
//   word     = { byte - ( ws | '"' | "(" | ")" ) }- ;
//
// Operator keywords are case-insensitive. Nested operators of the same kind
// are flattened and single-operand groups collapse to their operand.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "litscout/boolquery/ast.hpp"
#include "litscout/core/error.hpp"

namespace litscout::boolquery {

inline constexpr std::size_t kMaxNestingDepth = 128;

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'a' && x <= 'z') x = static_cast<char>(x - 32);
    if (y >= 'a' && y <= 'z') y = static_cast<char>(y - 32);
    if (x != y) return false;
  }
  return true;
}

inline bool is_keyword(std::string_view w) {
  return iequals(w, "AND") || iequals(w, "OR");
}

enum class TokenKind { word, phrase, and_op, or_op, lparen, rparen, end };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string text;                // word
  std::vector<std::string> words;  // phrase
};

inline std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (is_ascii_space(c)) {
      ++i;
    } else if (c == '(') {
      out.push_back({TokenKind::lparen, i, {}, {}});
      ++i;
    } else if (c == ')') {
      out.push_back({TokenKind::rparen, i, {}, {}});
      ++i;
    } else if (c == '"') {
      const std::size_t close = text.find('"', i + 1);
      if (close == std::string_view::npos) {
        throw QueryParseError("unbalanced quote", i);
      }
      Token tok{TokenKind::phrase, i, {}, {}};
      std::size_t j = i + 1;
      while (j < close) {
        while (j < close && is_ascii_space(text[j])) ++j;
        const std::size_t start = j;
        while (j < close && !is_ascii_space(text[j])) ++j;
        if (j > start) tok.words.emplace_back(text.substr(start, j - start));
      }
      if (tok.words.empty()) throw QueryParseError("empty phrase", i);
      out.push_back(std::move(tok));
      i = close + 1;
    } else {
      const std::size_t start = i;
      while (i < text.size() && !is_ascii_space(text[i]) && text[i] != '"' &&
             text[i] != '(' && text[i] != ')') {
        ++i;
      }
      std::string_view w = text.substr(start, i - start);
      if (iequals(w, "AND")) {
        out.push_back({TokenKind::and_op, start, {}, {}});
      } else if (iequals(w, "OR")) {
        out.push_back({TokenKind::or_op, start, {}, {}});
      } else {
        out.push_back({TokenKind::word, start, std::string(w), {}});
      }
    }
  }
  out.push_back({TokenKind::end, text.size(), {}, {}});
  return out;
}

template <typename Op>
Query combine(std::vector<Query> items) {
  if (items.size() == 1) return std::move(items.front());
  Op op;
  for (auto& q : items) {
    if (q.is<Op>()) {
      const auto& inner = q.as<Op>().children;
      op.children.insert(op.children.end(), inner.begin(), inner.end());
    } else {
      op.children.push_back(std::move(q));
    }
  }
  return op;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Query parse() {
    if (peek().kind == TokenKind::end) {
      throw QueryParseError("empty query", peek().offset);
    }
    Query q = parse_or(0);
    if (peek().kind == TokenKind::rparen) {
      throw QueryParseError("unbalanced parenthesis", peek().offset);
    }
    if (peek().kind != TokenKind::end) {
      throw QueryParseError("unexpected token", peek().offset);
    }
    return q;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  static bool starts_primary(TokenKind k) {
    return k == TokenKind::word || k == TokenKind::phrase ||
           k == TokenKind::lparen;
  }

  Query parse_or(std::size_t depth) {
    std::vector<Query> items;
    items.push_back(parse_and(depth));
    while (peek().kind == TokenKind::or_op) {
      next();
      items.push_back(parse_and(depth));
    }
    return combine<Or>(std::move(items));
  }

  Query parse_and(std::size_t depth) {
    std::vector<Query> items;
    items.push_back(parse_primary(depth));
    for (;;) {
      if (peek().kind == TokenKind::and_op) {
        next();
        items.push_back(parse_primary(depth));
      } else if (starts_primary(peek().kind)) {
        items.push_back(parse_primary(depth));
      } else {
        break;
      }
    }
    return combine<And>(std::move(items));
  }

  Query parse_primary(std::size_t depth) {
    const Token& tok = next();
    switch (tok.kind) {
      case TokenKind::word:
        return Term{tok.text};
      case TokenKind::phrase:
        return Phrase{tok.words};
      case TokenKind::lparen: {
        if (depth + 1 > kMaxNestingDepth) {
          throw QueryParseError("nesting too deep", tok.offset);
        }
        if (peek().kind == TokenKind::rparen) {
          throw QueryParseError("empty group", tok.offset);
        }
        Query inner = parse_or(depth + 1);
        if (peek().kind != TokenKind::rparen) {
          throw QueryParseError("unbalanced parenthesis", tok.offset);
        }
        next();
        return inner;
      }
      case TokenKind::rparen:
        throw QueryParseError("unbalanced parenthesis", tok.offset);
      case TokenKind::and_op:
      case TokenKind::or_op:
        throw QueryParseError("operator without left operand", tok.offset);
      case TokenKind::end:
        break;
    }
    throw QueryParseError("expected operand", tok.offset);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a Boolean search expression. Throws QueryParseError carrying the
/// byte offset of the offending token.
inline Query parse_query(std::string_view text) {
  return detail::Parser(detail::lex(text)).parse();
}

/// Empty when `q` satisfies every structural invariant.
inline std::vector<std::string> violations(const Query& q) {
  std::vector<std::string> out;
  auto check_word = [&](const std::string& w, bool is_term) {
    if (w.empty()) {
      out.emplace_back("empty word");
      return;
    }
    for (char c : w) {
      if (detail::is_ascii_space(c) || c == '"' ||
          (is_term && (c == '(' || c == ')'))) {
        out.push_back("illegal character in word '" + w + "'");
        return;
      }
    }
    if (is_term && detail::is_keyword(w)) {
      out.push_back("term '" + w + "' is an operator keyword");
    }
  };
  auto visit = [&](auto&& self, const Query& node, int parent) -> void {
    // parent: 0 none, 1 And, 2 Or
    if (node.is<Term>()) {
      check_word(node.as<Term>().word, true);
    } else if (node.is<Phrase>()) {
      const auto& p = node.as<Phrase>();
      if (p.words.empty()) out.emplace_back("phrase without words");
      for (const auto& w : p.words) check_word(w, false);
    } else {
      const bool is_and = node.is<And>();
      const auto& kids =
          is_and ? node.as<And>().children : node.as<Or>().children;
      if (kids.size() < 2) out.emplace_back("operator with fewer than 2 operands");
      if ((is_and && parent == 1) || (!is_and && parent == 2)) {
        out.emplace_back("unflattened nested operator");
      }
      for (const auto& k : kids) self(self, k, is_and ? 1 : 2);
    }
  };
  visit(visit, q, 0);
  return out;
}

inline bool is_valid(const Query& q) { return violations(q).empty(); }

}  // namespace litscout::boolquery
