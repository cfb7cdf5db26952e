#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <litscout/prompt_templates.hpp>
#include <nlohmann/json.hpp>

#include "litscout/boolquery/parser.hpp"
#include "litscout/core/types.hpp"
#include "litscout/llmgate/backend.hpp"
#include "litscout/llmgate/prompt.hpp"
#include "litscout/llmgate/structured.hpp"

namespace litscout::planner {

/// Weight sums within this distance of 1 are divided out; larger gaps reject.
inline constexpr double kWeightRepairTolerance = 0.05;

inline llmgate::PromptBundle build_plan_prompt(const ResearchQuery& query) {
  llmgate::PromptBundle b;
  b.system = std::string(prompts::plan_system);
  b.user = llmgate::render_template(
      prompts::plan_user, {{"timestamp", query.timestamp().to_string()},
                           {"user_query", query.text()}});
  return b;
}

namespace detail {

inline std::string position(std::string_view field, std::size_t i) {
  return std::string(field) + "[" + std::to_string(i) + "]";
}

inline std::optional<std::string> text_field(const nlohmann::json& obj,
                                             std::string_view key,
                                             const std::string& where,
                                             std::vector<std::string>& violations) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    violations.push_back(where + "." + std::string(key) + " must be a string");
    return std::nullopt;
  }
  auto s = it->get<std::string>();
  if (!unicode::has_visible_text(s)) {
    violations.push_back(where + "." + std::string(key) + " is empty");
    return std::nullopt;
  }
  return s;
}

}  // namespace detail

/// Validates model output against the plan schema and builds a version-1
/// plan with criterion ids c1..cm. Every violation is collected before
/// throwing so the repair prompt can name them all.
inline QueryPlan parse_plan(const nlohmann::json& value, const ResearchQuery& source) {
  std::vector<std::string> violations;
  if (!value.is_object()) throw ValidationError({"plan must be a JSON object"});

  std::vector<boolquery::Query> queries;
  auto sq = value.find("search_queries");
  if (sq == value.end() || !sq->is_array()) {
    violations.push_back("search_queries must be an array of strings");
  } else {
    if (sq->size() < kMinSearchQueries || sq->size() > kMaxSearchQueries) {
      violations.push_back("search_queries must contain 2 to 4 entries, got " +
                           std::to_string(sq->size()));
    }
    for (std::size_t i = 0; i < sq->size(); ++i) {
      const auto& item = (*sq)[i];
      const auto where = detail::position("search_queries", i);
      if (!item.is_string()) {
        violations.push_back(where + " must be a string");
        continue;
      }
      try {
        queries.push_back(boolquery::parse_query(item.get<std::string>()));
      } catch (const QueryParseError& e) {
        violations.push_back(where + " is not a valid Boolean query: " + e.what());
      }
    }
  }

  struct Draft {
    CriterionKind kind;
    std::string name, description;
    double weight;
  };
  std::vector<Draft> drafts;
  auto cr = value.find("criteria");
  if (cr == value.end() || !cr->is_array()) {
    violations.push_back("criteria must be an array of objects");
  } else {
    if (cr->size() < kMinCriteria || cr->size() > kMaxCriteria) {
      violations.push_back("criteria must contain 1 to 4 entries, got " +
                           std::to_string(cr->size()));
    }
    for (std::size_t i = 0; i < cr->size(); ++i) {
      const auto& item = (*cr)[i];
      const auto where = detail::position("criteria", i);
      if (!item.is_object()) {
        violations.push_back(where + " must be an object");
        continue;
      }
      auto type_it = item.find("type");
      if (type_it == item.end()) type_it = item.find("kind");
      if (type_it == item.end() || !type_it->is_string()) {
        violations.push_back(where + ".type must be a string");
      }
      auto name = detail::text_field(item, "name", where, violations);
      auto description = detail::text_field(item, "description", where, violations);
      auto w = item.find("weight");
      std::optional<double> weight;
      if (w == item.end() || !w->is_number()) {
        violations.push_back(where + ".weight must be a number");
      } else if (!(w->get<double>() > 0.0 && w->get<double>() <= 1.0)) {
        violations.push_back(where + ".weight must lie in (0, 1]");
      } else {
        weight = w->get<double>();
      }
      if (type_it != item.end() && type_it->is_string() && name && description &&
          weight) {
        drafts.push_back({criterion_kind_from_model(type_it->get<std::string>()),
                          *name, *description, *weight});
      }
    }
  }

  if (violations.empty()) {
    double sum = 0.0;
    for (const auto& d : drafts) sum += d.weight;
    if (std::abs(sum - 1.0) > kWeightRepairTolerance) {
      violations.push_back("criteria weights must sum to 1, got " +
                           nlohmann::json(sum).dump());
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  std::vector<double> weights;
  for (const auto& d : drafts) weights.push_back(d.weight);
  weights = renormalize(std::move(weights));
  std::vector<Criterion> criteria;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    criteria.emplace_back("c" + std::to_string(i + 1), drafts[i].kind,
                          drafts[i].name, drafts[i].description, weights[i]);
  }
  return QueryPlan(std::move(queries), CriteriaSet(std::move(criteria)), source);
}

inline llmgate::Generated<QueryPlan> generate_plan_with_attempts(
    const ResearchQuery& query, llmgate::Backend& backend) {
  return llmgate::generate_with_schema(
      build_plan_prompt(query), backend,
      [&](const nlohmann::json& v) { return parse_plan(v, query); });
}

inline QueryPlan generate_plan(const ResearchQuery& query, llmgate::Backend& backend) {
  return generate_plan_with_attempts(query, backend).value;
}

}  // namespace litscout::planner
