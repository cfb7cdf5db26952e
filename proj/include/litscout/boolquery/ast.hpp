#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace litscout::boolquery {

class Query;

struct Term {
  std::string word;
  friend bool operator==(const Term&, const Term&) = default;
};

struct Phrase {
  std::vector<std::string> words;
  friend bool operator==(const Phrase&, const Phrase&) = default;
};

struct And {
  std::vector<Query> children;
  friend bool operator==(const And&, const And&);
};

struct Or {
  std::vector<Query> children;
  friend bool operator==(const Or&, const Or&);
};

/// A Boolean scholarly search expression.
///
/// Valid trees satisfy: And/Or have at least two children, no And directly
/// under And and no Or directly under Or (operators are flattened), phrases
/// have at least one word, and words are non-empty without whitespace or
/// double quotes. Term words additionally exclude parentheses and the
/// operator keywords, so that every valid tree has a canonical rendering
/// that parses back to itself.
class Query {
 public:
  using Node = std::variant<Term, Phrase, And, Or>;

  Query(Term t) : node_(std::move(t)) {}
  Query(Phrase p) : node_(std::move(p)) {}
  Query(And a) : node_(std::move(a)) {}
  Query(Or o) : node_(std::move(o)) {}

  const Node& node() const noexcept { return node_; }

  template <typename T>
  bool is() const noexcept {
    return std::holds_alternative<T>(node_);
  }

  template <typename T>
  const T& as() const {
    return std::get<T>(node_);
  }

  friend bool operator==(const Query& a, const Query& b) {
    return a.node_ == b.node_;
  }

 private:
  Node node_;
};

inline bool operator==(const And& a, const And& b) {
  return a.children == b.children;
}
inline bool operator==(const Or& a, const Or& b) {
  return a.children == b.children;
}

inline Query term(std::string word) { return Term{std::move(word)}; }
inline Query phrase(std::vector<std::string> words) {
  return Phrase{std::move(words)};
}
inline Query all_of(std::vector<Query> children) {
  return And{std::move(children)};
}
inline Query any_of(std::vector<Query> children) {
  return Or{std::move(children)};
}

}  // namespace litscout::boolquery
