#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "litscout/llmgate/structured.hpp"
#include "litscout/validator/assessments.hpp"
#include "litscout/validator/prompt.hpp"
#include "litscout/validator/scoring.hpp"

namespace litscout::validator {

/// Placeholder verdict for a paper whose validation failed.
inline PaperVerdict failed_verdict(const PaperMetadata& paper, const CriteriaSet& criteria,
                                   const std::string& reason) {
  PaperVerdict v;
  v.paper_id = paper.paper_id;
  v.classification = Classification::No;
  v.score = 0.0;
  v.error = true;
  v.summary = "validation failed: " + reason;
  for (const auto& c : criteria) {
    CriterionAssessment a;
    a.criterion_id = c.id();
    a.verdict = AssessmentVerdict::insufficient_information;
    a.explanation = "not assessed";
    a.low_confidence = true;
    v.assessments.push_back(std::move(a));
  }
  return v;
}

inline PaperVerdict validate_paper(const QueryPlan& plan, const PaperMetadata& paper,
                                   llmgate::Backend& backend,
                                   const ScoringConfig& config) {
  const auto& criteria = plan.criteria();
  try {
    auto parsed = llmgate::generate_with_schema(
                      build_validation_prompt(plan.source_query(), criteria, paper),
                      backend,
                      [&](const nlohmann::json& v) {
                        return parse_assessments(v, criteria);
                      })
                      .value;
    PaperVerdict v;
    v.paper_id = paper.paper_id;
    v.assessments = verify_evidence(std::move(parsed.assessments), paper);
    v.score = score_paper(v.assessments, criteria, config);
    v.classification = classify(v.score, v.assessments, config);
    v.summary = std::move(parsed.summary);
    return v;
  } catch (const std::exception& e) {
    return failed_verdict(paper, criteria, e.what());
  }
}

using VerdictCallback = std::function<void(const PaperVerdict&)>;

/// Validates every paper with at most `config.concurrency_limit` in flight.
/// `on_verdict` sees verdicts in completion order (serialized); the returned
/// list is in result order and independent of timing.
inline std::vector<PaperVerdict> validate_candidates(
    const QueryPlan& plan, const std::vector<PaperMetadata>& papers,
    llmgate::Backend& backend, const ScoringConfig& config = {},
    const VerdictCallback& on_verdict = {}) {
  config.validate();
  std::vector<PaperVerdict> results(papers.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < papers.size(); i = next++) {
      results[i] = validate_paper(plan, papers[i], backend, config);
      if (on_verdict) {
        std::lock_guard lock(callback_mutex);
        on_verdict(results[i]);
      }
    }
  };
  const std::size_t n_threads = std::min(config.concurrency_limit, papers.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  if (n_threads > 0) worker();
  for (auto& t : threads) t.join();

  std::vector<std::size_t> order(papers.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return verdict_before(results[a], papers[a], results[b], papers[b]);
  });
  std::vector<PaperVerdict> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(std::move(results[i]));
  return out;
}

}  // namespace litscout::validator
