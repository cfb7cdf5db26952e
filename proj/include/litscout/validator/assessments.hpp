#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litscout/core/types.hpp"
#include "litscout/core/unicode.hpp"
#include "litscout/validator/prompt.hpp"

namespace litscout::validator {

struct ParsedAssessments {
  /// One entry per criterion, in plan order.
  std::vector<CriterionAssessment> assessments;
  std::string summary;
};

/// Resolves a model-emitted criterion reference: the plan id ("c2"), the
/// prompt tag ("criterion_2"), or the bare position (2 or "2").
inline std::optional<std::size_t> resolve_criterion(const nlohmann::json& ref,
                                                    const CriteriaSet& criteria) {
  auto by_position = [&](long long n) -> std::optional<std::size_t> {
    if (n >= 1 && n <= static_cast<long long>(criteria.size())) {
      return static_cast<std::size_t>(n - 1);
    }
    return std::nullopt;
  };
  if (ref.is_number_integer()) return by_position(ref.get<long long>());
  if (!ref.is_string()) return std::nullopt;
  const std::string s = unicode::trim_ascii(ref.get<std::string>());
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (criteria[i].id() == s || criterion_tag(i) == s) return i;
  }
  if (!s.empty() && s.size() < 4 &&
      s.find_first_not_of("0123456789") == std::string::npos) {
    return by_position(std::stoll(s));
  }
  return std::nullopt;
}

/// Schema check for one validation response; throws ValidationError listing
/// every violation.
inline ParsedAssessments parse_assessments(const nlohmann::json& value,
                                           const CriteriaSet& criteria) {
  if (!value.is_object()) throw ValidationError({"response must be a JSON object"});
  std::vector<std::string> violations;
  std::vector<std::optional<CriterionAssessment>> slots(criteria.size());

  auto arr = value.find("criteria_assessment");
  if (arr == value.end() || !arr->is_array()) {
    violations.push_back("criteria_assessment must be an array");
  } else {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const auto& item = (*arr)[i];
      const auto where = "criteria_assessment[" + std::to_string(i) + "]";
      if (!item.is_object()) {
        violations.push_back(where + " must be an object");
        continue;
      }
      std::optional<std::size_t> slot;
      auto id = item.find("criterion_id");
      if (id == item.end()) {
        violations.push_back(where + ".criterion_id is missing");
      } else if (!(slot = resolve_criterion(*id, criteria))) {
        violations.push_back(where + ".criterion_id " + id->dump() +
                             " does not name a criterion");
      } else if (slots[*slot]) {
        violations.push_back(where + ".criterion_id " + id->dump() +
                             " is a duplicate");
        slot.reset();
      }

      CriterionAssessment a;
      bool ok = slot.has_value();
      auto verdict = item.find("assessment");
      if (verdict == item.end()) verdict = item.find("verdict");
      if (verdict == item.end() || !verdict->is_string()) {
        violations.push_back(where + ".assessment must be a string");
        ok = false;
      } else if (auto v = verdict_from_string(
                     unicode::trim_ascii(verdict->get<std::string>()))) {
        a.verdict = *v;
      } else {
        violations.push_back(where + ".assessment " + verdict->dump() +
                             " must be one of support, somewhat_support, reject, "
                             "insufficient_information");
        ok = false;
      }
      auto expl = item.find("explanation");
      if (expl == item.end() || !expl->is_string() ||
          !unicode::has_visible_text(expl->get<std::string>())) {
        violations.push_back(where + ".explanation must be a non-empty string");
        ok = false;
      } else {
        a.explanation = expl->get<std::string>();
      }
      auto ev = item.find("evidence");
      if (ev == item.end() || !ev->is_array()) {
        violations.push_back(where + ".evidence must be an array");
        ok = false;
      } else {
        for (std::size_t k = 0; k < ev->size(); ++k) {
          const auto& span = (*ev)[k];
          const auto at = where + ".evidence[" + std::to_string(k) + "]";
          auto src = span.is_object() ? span.find("source") : span.end();
          auto txt = span.is_object() ? span.find("text") : span.end();
          if (!span.is_object() || src == span.end() || !src->is_string() ||
              txt == span.end() || !txt->is_string() ||
              txt->get<std::string>().empty()) {
            violations.push_back(at + " must be {source, text} with non-empty text");
            ok = false;
            continue;
          }
          const auto raw = src->get<std::string>();
          auto field = paper_field_from_string(raw);
          a.evidence.push_back(
              {field ? std::string(to_string(*field)) : raw, txt->get<std::string>(),
               false});
        }
      }
      if (ok) {
        a.criterion_id = criteria[*slot].id();
        slots[*slot] = std::move(a);
      }
    }
  }
  if (arr != value.end() && arr->is_array()) {
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      if (!slots[i]) {
        violations.push_back("no valid assessment for " + criterion_tag(i) + " (" +
                             criteria[i].id() + ")");
      }
    }
  }
  std::string summary;
  auto s = value.find("summary");
  if (s == value.end() || !s->is_string()) {
    violations.push_back("summary must be a string");
  } else {
    summary = s->get<std::string>();
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  ParsedAssessments out;
  for (auto& slot : slots) out.assessments.push_back(std::move(*slot));
  out.summary = std::move(summary);
  return out;
}

/// Marks each span verified iff, after NFKC, lowercasing and whitespace
/// folding on both sides, it is a substring of the named field. Verdicts are
/// never changed; a positive verdict with no verified span is flagged
/// low_confidence.
inline std::vector<CriterionAssessment> verify_evidence(
    std::vector<CriterionAssessment> assessments, const PaperMetadata& paper) {
  for (auto& a : assessments) {
    bool any = false;
    for (auto& span : a.evidence) {
      auto field = paper_field_from_string(span.source);
      const auto needle = unicode::fold_whitespace(span.text);
      span.verified = field && !needle.empty() &&
                      unicode::fold_whitespace(field_text(paper, *field))
                              .find(needle) != std::string::npos;
      any = any || span.verified;
    }
    const bool positive = a.verdict == AssessmentVerdict::support ||
                          a.verdict == AssessmentVerdict::somewhat_support;
    a.low_confidence = positive && !any;
  }
  return assessments;
}

}  // namespace litscout::validator
