#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "litscout/core/serialize.hpp"

namespace litscout::planner {

struct AddCriterion {
  CriterionKind kind = CriterionKind::other;
  std::string name;
  std::string description;
  double weight = 0.0;
};
struct RemoveCriterion {
  std::string id;
};
/// Rewrites a criterion in place, keeping its id. Weight is kept when absent.
struct ReplaceCriterion {
  std::string id;
  CriterionKind kind = CriterionKind::other;
  std::string name;
  std::string description;
  std::optional<double> weight;
};
struct SetWeight {
  std::string id;
  double weight = 0.0;
};
struct AddQuery {
  std::string query;
};
struct RemoveQuery {
  std::size_t index = 0;
};
struct ReplaceQuery {
  std::size_t index = 0;
  std::string query;
};

using EditCommand = std::variant<AddCriterion, RemoveCriterion, ReplaceCriterion,
                                 SetWeight, AddQuery, RemoveQuery, ReplaceQuery>;

namespace detail {

struct DraftCriterion {
  std::string id;
  CriterionKind kind;
  std::string name;
  std::string description;
  double weight;
};

inline int id_number(const std::string& id) {
  if (id.size() < 2 || id[0] != 'c') return 0;
  int n = 0;
  for (std::size_t i = 1; i < id.size(); ++i) {
    if (id[i] < '0' || id[i] > '9' || n > 100000) return 0;
    n = n * 10 + (id[i] - '0');
  }
  return n;
}

inline void check_weight(double w, std::vector<std::string>& errors,
                         const std::string& where) {
  if (!(w > 0.0 && w <= 1.0)) errors.push_back(where + ": weight must lie in (0, 1]");
}

inline void check_text(const std::string& s, std::string_view field,
                       std::vector<std::string>& errors, const std::string& where) {
  if (!unicode::has_visible_text(s)) {
    errors.push_back(where + ": " + std::string(field) + " is empty");
  }
}

}  // namespace detail

/// Applies edits in order and returns the next plan version. Criterion ids
/// persist; added criteria take the next unused number. Weights are
/// renormalized once, after all edits.
inline QueryPlan apply_edits(const QueryPlan& plan, const std::vector<EditCommand>& edits) {
  if (edits.empty()) throw EditError({"edit list is empty"});
  std::vector<detail::DraftCriterion> crit;
  int next_id = 0;
  for (const auto& c : plan.criteria()) {
    crit.push_back({c.id(), c.kind(), c.name(), c.description(), c.weight()});
    next_id = std::max(next_id, detail::id_number(c.id()));
  }
  std::vector<boolquery::Query> queries = plan.search_queries();
  std::vector<std::string> errors;

  auto find = [&](const std::string& id) {
    return std::find_if(crit.begin(), crit.end(),
                        [&](const auto& c) { return c.id == id; });
  };
  auto parse = [&](const std::string& text,
                   const std::string& where) -> std::optional<boolquery::Query> {
    try {
      return boolquery::parse_query(text);
    } catch (const QueryParseError& e) {
      errors.push_back(where + ": " + e.what());
      return std::nullopt;
    }
  };

  for (std::size_t i = 0; i < edits.size(); ++i) {
    const std::string where = "edit " + std::to_string(i);
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, AddCriterion>) {
            detail::check_text(e.name, "name", errors, where);
            detail::check_text(e.description, "description", errors, where);
            detail::check_weight(e.weight, errors, where);
            crit.push_back({"c" + std::to_string(++next_id), e.kind, e.name,
                            e.description, e.weight});
          } else if constexpr (std::is_same_v<E, RemoveCriterion>) {
            auto it = find(e.id);
            if (it == crit.end()) {
              errors.push_back(where + ": unknown criterion id '" + e.id + "'");
            } else {
              crit.erase(it);
            }
          } else if constexpr (std::is_same_v<E, ReplaceCriterion>) {
            auto it = find(e.id);
            detail::check_text(e.name, "name", errors, where);
            detail::check_text(e.description, "description", errors, where);
            if (e.weight) detail::check_weight(*e.weight, errors, where);
            if (it == crit.end()) {
              errors.push_back(where + ": unknown criterion id '" + e.id + "'");
            } else {
              *it = {e.id, e.kind, e.name, e.description, e.weight.value_or(it->weight)};
            }
          } else if constexpr (std::is_same_v<E, SetWeight>) {
            auto it = find(e.id);
            detail::check_weight(e.weight, errors, where);
            if (it == crit.end()) {
              errors.push_back(where + ": unknown criterion id '" + e.id + "'");
            } else {
              it->weight = e.weight;
            }
          } else if constexpr (std::is_same_v<E, AddQuery>) {
            if (auto q = parse(e.query, where)) queries.push_back(std::move(*q));
          } else if constexpr (std::is_same_v<E, RemoveQuery>) {
            if (e.index >= queries.size()) {
              errors.push_back(where + ": no search query at index " +
                               std::to_string(e.index));
            } else {
              queries.erase(queries.begin() + static_cast<std::ptrdiff_t>(e.index));
            }
          } else {
            if (e.index >= queries.size()) {
              errors.push_back(where + ": no search query at index " +
                               std::to_string(e.index));
            } else if (auto q = parse(e.query, where)) {
              queries[e.index] = std::move(*q);
            }
          }
        },
        edits[i]);
  }

  if (crit.size() < kMinCriteria || crit.size() > kMaxCriteria) {
    errors.push_back("criteria count must lie in [1, 4], got " +
                     std::to_string(crit.size()));
  }
  if (queries.size() < kMinSearchQueries || queries.size() > kMaxSearchQueries) {
    errors.push_back("search query count must lie in [2, 4], got " +
                     std::to_string(queries.size()));
  }
  if (!errors.empty()) throw EditError(std::move(errors));

  std::vector<double> w;
  for (const auto& c : crit) w.push_back(c.weight);
  w = renormalize(std::move(w));
  std::vector<Criterion> out;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    out.emplace_back(crit[i].id, crit[i].kind, crit[i].name, crit[i].description, w[i]);
  }
  return QueryPlan(std::move(queries), CriteriaSet(std::move(out)), plan.source_query(),
                   plan.version() + 1);
}

// ---- wire encoding --------------------------------------------------------
// {"op": "add_criterion", "kind", "name", "description", "weight"}
// {"op": "remove_criterion", "id"}
// {"op": "replace_criterion", "id", "kind", "name", "description", "weight"?}
// {"op": "set_weight", "id", "weight"}
// {"op": "add_query", "query"}
// {"op": "remove_query", "index"}
// {"op": "replace_query", "index", "query"}

inline json encode(const EditCommand& cmd) {
  return std::visit(
      [](const auto& e) -> json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, AddCriterion>) {
          return {{"op", "add_criterion"}, {"kind", std::string(to_string(e.kind))},
                  {"name", e.name}, {"description", e.description},
                  {"weight", e.weight}};
        } else if constexpr (std::is_same_v<E, RemoveCriterion>) {
          return {{"op", "remove_criterion"}, {"id", e.id}};
        } else if constexpr (std::is_same_v<E, ReplaceCriterion>) {
          return {{"op", "replace_criterion"}, {"id", e.id},
                  {"kind", std::string(to_string(e.kind))}, {"name", e.name},
                  {"description", e.description},
                  {"weight", jsonio::optional_json(e.weight)}};
        } else if constexpr (std::is_same_v<E, SetWeight>) {
          return {{"op", "set_weight"}, {"id", e.id}, {"weight", e.weight}};
        } else if constexpr (std::is_same_v<E, AddQuery>) {
          return {{"op", "add_query"}, {"query", e.query}};
        } else if constexpr (std::is_same_v<E, RemoveQuery>) {
          return {{"op", "remove_query"}, {"index", e.index}};
        } else {
          return {{"op", "replace_query"}, {"index", e.index}, {"query", e.query}};
        }
      },
      cmd);
}

inline EditCommand decode_edit(const json& j) {
  const auto op = jsonio::get_string(j, "op");
  auto kind = [&] {
    const auto k = jsonio::get_string(j, "kind");
    auto parsed = criterion_kind_from_string(k);
    if (!parsed) throw InvalidValue("unknown criterion kind '" + k + "'");
    return *parsed;
  };
  auto index = [&] {
    const auto i = jsonio::get_integer(j, "index");
    if (i < 0) throw InvalidValue("index must be non-negative");
    return static_cast<std::size_t>(i);
  };
  if (op == "add_criterion") {
    return AddCriterion{kind(), jsonio::get_string(j, "name"),
                        jsonio::get_string(j, "description"),
                        jsonio::get_number(j, "weight")};
  }
  if (op == "remove_criterion") return RemoveCriterion{jsonio::get_string(j, "id")};
  if (op == "replace_criterion") {
    std::optional<double> w;
    if (jsonio::present(j, "weight")) w = jsonio::get_number(j, "weight");
    return ReplaceCriterion{jsonio::get_string(j, "id"), kind(),
                            jsonio::get_string(j, "name"),
                            jsonio::get_string(j, "description"), w};
  }
  if (op == "set_weight") {
    return SetWeight{jsonio::get_string(j, "id"), jsonio::get_number(j, "weight")};
  }
  if (op == "add_query") return AddQuery{jsonio::get_string(j, "query")};
  if (op == "remove_query") return RemoveQuery{index()};
  if (op == "replace_query") return ReplaceQuery{index(), jsonio::get_string(j, "query")};
  throw InvalidValue("unknown edit op '" + op + "'");
}

inline std::vector<EditCommand> decode_edits(const json& j) {
  if (!j.is_array()) throw InvalidValue("edits must be an array");
  std::vector<EditCommand> out;
  for (const auto& e : j) out.push_back(decode_edit(e));
  return out;
}

}  // namespace litscout::planner
