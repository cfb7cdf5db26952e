#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litscout/boolquery/ast.hpp"
#include "litscout/boolquery/parser.hpp"
#include "litscout/core/error.hpp"
#include "litscout/core/time.hpp"
#include "litscout/core/unicode.hpp"

namespace litscout {

/// Tolerance for Σw = 1 on a constructed criteria set.
inline constexpr double kWeightSumTolerance = 1e-6;
inline constexpr std::size_t kMinCriteria = 1;
inline constexpr std::size_t kMaxCriteria = 4;
inline constexpr std::size_t kMinSearchQueries = 2;
inline constexpr std::size_t kMaxSearchQueries = 4;

class ResearchQuery {
 public:
  ResearchQuery(std::string text, Timestamp timestamp,
                std::optional<std::string> language_hint = std::nullopt)
      : text_(std::move(text)),
        timestamp_(timestamp),
        language_hint_(std::move(language_hint)) {
    if (!unicode::has_visible_text(text_)) {
      throw InvalidValue("research query text is empty");
    }
    if (language_hint_ && language_hint_->empty()) {
      throw InvalidValue("language hint must be non-empty when present");
    }
  }

  const std::string& text() const noexcept { return text_; }
  const Timestamp& timestamp() const noexcept { return timestamp_; }
  const std::optional<std::string>& language_hint() const noexcept {
    return language_hint_;
  }

  friend bool operator==(const ResearchQuery&, const ResearchQuery&) = default;

 private:
  std::string text_;
  Timestamp timestamp_;
  std::optional<std::string> language_hint_;
};

enum class CriterionKind { task, method, dataset, metric, other };

inline std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::task: return "task";
    case CriterionKind::method: return "method";
    case CriterionKind::dataset: return "dataset";
    case CriterionKind::metric: return "metric";
    case CriterionKind::other: return "other";
  }
  return "other";
}

/// Strict parse of the five canonical names.
inline std::optional<CriterionKind> criterion_kind_from_string(
    std::string_view s) {
  for (auto k : {CriterionKind::task, CriterionKind::method,
                 CriterionKind::dataset, CriterionKind::metric,
                 CriterionKind::other}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

/// Lenient mapping for model output: common synonyms fold onto the closed
/// set, anything else becomes `other`.
inline CriterionKind criterion_kind_from_model(std::string_view s) {
  std::string lower;
  for (char c : s) {
    lower.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  lower = unicode::trim_ascii(lower);
  if (auto k = criterion_kind_from_string(lower)) return *k;
  if (lower == "methodology" || lower == "methods" || lower == "approach" ||
      lower == "technique") {
    return CriterionKind::method;
  }
  if (lower == "tasks" || lower == "topic" || lower == "problem") {
    return CriterionKind::task;
  }
  if (lower == "datasets" || lower == "data" || lower == "benchmark") {
    return CriterionKind::dataset;
  }
  if (lower == "metrics" || lower == "evaluation" || lower == "measure") {
    return CriterionKind::metric;
  }
  return CriterionKind::other;
}

class Criterion {
 public:
  Criterion(std::string id, CriterionKind kind, std::string name,
            std::string description, double weight)
      : id_(std::move(id)),
        kind_(kind),
        name_(std::move(name)),
        description_(std::move(description)),
        weight_(weight) {
    if (id_.empty()) throw InvalidValue("criterion id is empty");
    if (!unicode::has_visible_text(name_)) {
      throw InvalidValue("criterion name is empty");
    }
    if (!unicode::has_visible_text(description_)) {
      throw InvalidValue("criterion description is empty");
    }
    if (!std::isfinite(weight_) || weight_ <= 0.0 || weight_ > 1.0) {
      throw InvalidValue("criterion weight must lie in (0, 1]");
    }
  }

  const std::string& id() const noexcept { return id_; }
  CriterionKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::string& description() const noexcept { return description_; }
  double weight() const noexcept { return weight_; }

  Criterion with_weight(double w) const {
    return Criterion(id_, kind_, name_, description_, w);
  }

  friend bool operator==(const Criterion&, const Criterion&) = default;

 private:
  std::string id_;
  CriterionKind kind_;
  std::string name_;
  std::string description_;
  double weight_;
};

/// Divides by the sum unless the sum is already 1 to within 1e-9, so exact
/// decimal inputs such as 0.4/0.3/0.3 keep their written values. Ratios
/// between weights are preserved either way.
inline std::vector<double> renormalize(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (sum > 0.0 && std::abs(sum - 1.0) > 1e-9) {
    for (double& w : weights) w /= sum;
  }
  return weights;
}

class CriteriaSet {
 public:
  explicit CriteriaSet(std::vector<Criterion> criteria)
      : criteria_(std::move(criteria)) {
    if (criteria_.size() < kMinCriteria || criteria_.size() > kMaxCriteria) {
      throw InvalidValue("criteria count must lie in [1, 4], got " +
                         std::to_string(criteria_.size()));
    }
    std::set<std::string> ids;
    double sum = 0.0;
    for (const auto& c : criteria_) {
      if (!ids.insert(c.id()).second) {
        throw InvalidValue("duplicate criterion id '" + c.id() + "'");
      }
      sum += c.weight();
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
      throw InvalidValue("criteria weights must sum to 1");
    }
  }

  const std::vector<Criterion>& criteria() const noexcept { return criteria_; }
  std::size_t size() const noexcept { return criteria_.size(); }
  auto begin() const noexcept { return criteria_.begin(); }
  auto end() const noexcept { return criteria_.end(); }
  const Criterion& operator[](std::size_t i) const { return criteria_.at(i); }

  const Criterion* find(std::string_view id) const {
    auto it = std::find_if(criteria_.begin(), criteria_.end(),
                           [&](const Criterion& c) { return c.id() == id; });
    return it == criteria_.end() ? nullptr : &*it;
  }

  std::vector<double> weights() const {
    std::vector<double> w;
    w.reserve(criteria_.size());
    for (const auto& c : criteria_) w.push_back(c.weight());
    return w;
  }

  friend bool operator==(const CriteriaSet&, const CriteriaSet&) = default;

 private:
  std::vector<Criterion> criteria_;
};

class QueryPlan {
 public:
  QueryPlan(std::vector<boolquery::Query> search_queries, CriteriaSet criteria,
            ResearchQuery source_query, int version = 1)
      : search_queries_(std::move(search_queries)),
        criteria_(std::move(criteria)),
        source_query_(std::move(source_query)),
        version_(version) {
    if (search_queries_.size() < kMinSearchQueries ||
        search_queries_.size() > kMaxSearchQueries) {
      throw InvalidValue("search query count must lie in [2, 4], got " +
                         std::to_string(search_queries_.size()));
    }
    for (const auto& q : search_queries_) {
      if (!boolquery::is_valid(q)) {
        throw InvalidValue("malformed search query tree");
      }
    }
    if (version_ < 1) throw InvalidValue("plan version must be >= 1");
  }

  const std::vector<boolquery::Query>& search_queries() const noexcept {
    return search_queries_;
  }
  const CriteriaSet& criteria() const noexcept { return criteria_; }
  const ResearchQuery& source_query() const noexcept { return source_query_; }
  int version() const noexcept { return version_; }

  friend bool operator==(const QueryPlan&, const QueryPlan&) = default;

 private:
  std::vector<boolquery::Query> search_queries_;
  CriteriaSet criteria_;
  ResearchQuery source_query_;
  int version_;
};

/// One scholarly record. Plain aggregate; `validate()` enforces invariants
/// at every deserialization boundary.
struct PaperMetadata {
  std::string paper_id;
  std::string title;
  std::vector<std::string> authors;
  std::vector<std::string> affiliations;
  std::string venue;
  std::string venue_type;
  std::vector<std::string> research_fields;
  std::optional<std::string> doi;
  std::optional<Date> publication_date;
  std::string abstract;
  std::optional<std::int64_t> citation_count;
  std::optional<std::string> source_url;

  void validate() const {
    if (paper_id.empty()) throw InvalidValue("paper_id is empty");
    if (!unicode::has_visible_text(title)) {
      throw InvalidValue("paper title is empty");
    }
    if (citation_count && *citation_count < 0) {
      throw InvalidValue("citation_count must be non-negative");
    }
  }

  /// Number of non-empty fields; used to pick a survivor when deduplicating.
  std::size_t filled_fields() const {
    std::size_t n = 0;
    n += !paper_id.empty();
    n += !title.empty();
    n += !authors.empty();
    n += !affiliations.empty();
    n += !venue.empty();
    n += !venue_type.empty();
    n += !research_fields.empty();
    n += doi && !doi->empty();
    n += publication_date.has_value();
    n += !abstract.empty();
    n += citation_count.has_value();
    n += source_url && !source_url->empty();
    return n;
  }

  friend bool operator==(const PaperMetadata&, const PaperMetadata&) = default;
};

enum class PaperField {
  title,
  abstract,
  authors,
  affiliations,
  venue,
  venue_type,
  research_fields,
  doi,
  publication_date,
  citation_count,
  source_url,
};

inline std::string_view to_string(PaperField f) {
  switch (f) {
    case PaperField::title: return "title";
    case PaperField::abstract: return "abstract";
    case PaperField::authors: return "authors";
    case PaperField::affiliations: return "affiliations";
    case PaperField::venue: return "venue";
    case PaperField::venue_type: return "venue_type";
    case PaperField::research_fields: return "research_fields";
    case PaperField::doi: return "doi";
    case PaperField::publication_date: return "publication_date";
    case PaperField::citation_count: return "citation_count";
    case PaperField::source_url: return "source_url";
  }
  return "title";
}

/// Accepts the field names and the tag names used in the validation prompt
/// (conference_journal, research_field, ...), case-insensitively.
inline std::optional<PaperField> paper_field_from_string(std::string_view s) {
  std::string k;
  for (char c : unicode::trim_ascii(s)) {
    k.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  struct Alias {
    std::string_view name;
    PaperField field;
  };
  static constexpr Alias aliases[] = {
      {"title", PaperField::title},
      {"abstract", PaperField::abstract},
      {"authors", PaperField::authors},
      {"author", PaperField::authors},
      {"affiliations", PaperField::affiliations},
      {"affiliation", PaperField::affiliations},
      {"venue", PaperField::venue},
      {"conference_journal", PaperField::venue},
      {"venue_type", PaperField::venue_type},
      {"conference_journal_type", PaperField::venue_type},
      {"research_fields", PaperField::research_fields},
      {"research_field", PaperField::research_fields},
      {"doi", PaperField::doi},
      {"publication_date", PaperField::publication_date},
      {"citation_count", PaperField::citation_count},
      {"source_url", PaperField::source_url},
      {"url", PaperField::source_url},
  };
  for (const auto& a : aliases) {
    if (k == a.name) return a.field;
  }
  return std::nullopt;
}

inline std::string join(const std::vector<std::string>& items,
                        std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

/// Text of a metadata field as shown to the model; empty when absent.
inline std::string field_text(const PaperMetadata& p, PaperField f) {
  switch (f) {
    case PaperField::title: return p.title;
    case PaperField::abstract: return p.abstract;
    case PaperField::authors: return join(p.authors, ", ");
    case PaperField::affiliations: return join(p.affiliations, "; ");
    case PaperField::venue: return p.venue;
    case PaperField::venue_type: return p.venue_type;
    case PaperField::research_fields: return join(p.research_fields, ", ");
    case PaperField::doi: return p.doi.value_or("");
    case PaperField::publication_date:
      return p.publication_date ? p.publication_date->to_string() : "";
    case PaperField::citation_count:
      return p.citation_count ? std::to_string(*p.citation_count) : "";
    case PaperField::source_url: return p.source_url.value_or("");
  }
  return {};
}

enum class AssessmentVerdict {
  support,
  somewhat_support,
  reject,
  insufficient_information,
};

inline constexpr AssessmentVerdict kAllVerdicts[] = {
    AssessmentVerdict::support, AssessmentVerdict::somewhat_support,
    AssessmentVerdict::reject, AssessmentVerdict::insufficient_information};

inline std::string_view to_string(AssessmentVerdict v) {
  switch (v) {
    case AssessmentVerdict::support: return "support";
    case AssessmentVerdict::somewhat_support: return "somewhat_support";
    case AssessmentVerdict::reject: return "reject";
    case AssessmentVerdict::insufficient_information:
      return "insufficient_information";
  }
  return "reject";
}

/// Exactly the four taxonomy strings; anything else is rejected.
inline std::optional<AssessmentVerdict> verdict_from_string(std::string_view s) {
  for (auto v : kAllVerdicts) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

struct EvidenceSpan {
  /// Canonical field name when recognized, otherwise the name as emitted.
  std::string source;
  std::string text;
  bool verified = false;

  friend bool operator==(const EvidenceSpan&, const EvidenceSpan&) = default;
};

struct CriterionAssessment {
  std::string criterion_id;
  AssessmentVerdict verdict = AssessmentVerdict::insufficient_information;
  std::string explanation;
  std::vector<EvidenceSpan> evidence;
  bool low_confidence = false;

  friend bool operator==(const CriterionAssessment&,
                         const CriterionAssessment&) = default;
};

enum class Classification { Perfect, Partial, No };

inline std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Perfect: return "Perfect";
    case Classification::Partial: return "Partial";
    case Classification::No: return "No";
  }
  return "No";
}

inline std::optional<Classification> classification_from_string(
    std::string_view s) {
  for (auto c : {Classification::Perfect, Classification::Partial,
                 Classification::No}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

struct PaperVerdict {
  std::string paper_id;
  Classification classification = Classification::No;
  double score = 0.0;
  std::vector<CriterionAssessment> assessments;
  std::string summary;
  /// Set when validation of this paper failed and the verdict is a
  /// placeholder (classification No, score 0, error text in summary).
  bool error = false;

  friend bool operator==(const PaperVerdict&, const PaperVerdict&) = default;
};

}  // namespace litscout
