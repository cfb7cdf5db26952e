#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "litscout/core/paper_key.hpp"
#include "litscout/core/types.hpp"

namespace litscout::validator {

struct ScoringConfig {
  std::map<AssessmentVerdict, double> verdict_values = {
      {AssessmentVerdict::support, 1.0},
      {AssessmentVerdict::somewhat_support, 0.5},
      {AssessmentVerdict::insufficient_information, 0.25},
      {AssessmentVerdict::reject, 0.0},
  };
  double theta_no = 0.35;
  std::size_t concurrency_limit = 4;

  double value(AssessmentVerdict v) const { return verdict_values.at(v); }

  void validate() const {
    for (auto v : kAllVerdicts) {
      auto it = verdict_values.find(v);
      if (it == verdict_values.end()) {
        throw ConfigurationError("no value for verdict " + std::string(to_string(v)));
      }
      if (!(it->second >= 0.0 && it->second <= 1.0)) {
        throw ConfigurationError("verdict values must lie in [0, 1]");
      }
    }
    using V = AssessmentVerdict;
    if (!(value(V::support) > value(V::somewhat_support) &&
          value(V::somewhat_support) > value(V::insufficient_information) &&
          value(V::insufficient_information) >= value(V::reject))) {
      throw ConfigurationError(
          "verdict values must be ordered support > somewhat_support > "
          "insufficient_information >= reject");
    }
    if (!(theta_no > 0.0 && theta_no < 1.0)) {
      throw ConfigurationError("theta_no must lie in (0, 1)");
    }
    if (concurrency_limit < 1) {
      throw ConfigurationError("concurrency_limit must be positive");
    }
  }
};

/// Weighted verdict value, clamped to [0, 1] against weight-sum rounding.
inline double score_paper(const std::vector<CriterionAssessment>& assessments,
                          const CriteriaSet& criteria, const ScoringConfig& config) {
  if (assessments.size() != criteria.size()) {
    throw InvalidValue("expected one assessment per criterion");
  }
  double score = 0.0;
  for (const auto& a : assessments) {
    const Criterion* c = criteria.find(a.criterion_id);
    if (c == nullptr) {
      throw InvalidValue("assessment for unknown criterion '" + a.criterion_id + "'");
    }
    score += c->weight() * config.value(a.verdict);
  }
  return std::clamp(score, 0.0, 1.0);
}

inline Classification classify(double score,
                               const std::vector<CriterionAssessment>& assessments,
                               const ScoringConfig& config = {}) {
  auto all = [&](AssessmentVerdict v) {
    return !assessments.empty() &&
           std::all_of(assessments.begin(), assessments.end(),
                       [&](const auto& a) { return a.verdict == v; });
  };
  if (all(AssessmentVerdict::support)) return Classification::Perfect;
  if (score < config.theta_no || all(AssessmentVerdict::reject)) {
    return Classification::No;
  }
  return Classification::Partial;
}

/// Scores compared at 1e-9 resolution so summation-order noise cannot flip
/// a tie.
inline long long score_key(double score) { return std::llround(score * 1e9); }

/// Result order: score desc, citations desc (absent last), normalized title
/// asc, paper id asc.
inline bool verdict_before(const PaperVerdict& a, const PaperMetadata& pa,
                           const PaperVerdict& b, const PaperMetadata& pb) {
  if (score_key(a.score) != score_key(b.score)) {
    return score_key(a.score) > score_key(b.score);
  }
  const auto ca = pa.citation_count.value_or(-1);
  const auto cb = pb.citation_count.value_or(-1);
  if (ca != cb) return ca > cb;
  const auto ta = normalized_title(pa);
  const auto tb = normalized_title(pb);
  if (ta != tb) return ta < tb;
  return a.paper_id < b.paper_id;
}

}  // namespace litscout::validator
