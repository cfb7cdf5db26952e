#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "litscout/core/serialize.hpp"
#include "litscout/evalkit/embed.hpp"
#include "litscout/evalkit/metrics.hpp"

namespace litscout::evalkit {

struct ReferenceCriterion {
  std::string name;
  std::string description;

  friend bool operator==(const ReferenceCriterion&, const ReferenceCriterion&) = default;
};

class GenerationEvalItem {
 public:
  GenerationEvalItem(ResearchQuery query, std::vector<std::string> reference_queries,
                     std::vector<ReferenceCriterion> reference_criteria, QueryPlan generated)
      : query_(std::move(query)),
        reference_queries_(std::move(reference_queries)),
        reference_criteria_(std::move(reference_criteria)),
        generated_(std::move(generated)) {
    if (reference_queries_.empty()) throw InvalidValue("reference_search_queries is empty");
    if (reference_criteria_.empty()) throw InvalidValue("reference_criteria is empty");
  }

  const ResearchQuery& query() const noexcept { return query_; }
  const std::vector<std::string>& reference_queries() const noexcept {
    return reference_queries_;
  }
  const std::vector<ReferenceCriterion>& reference_criteria() const noexcept {
    return reference_criteria_;
  }
  const QueryPlan& generated() const noexcept { return generated_; }

 private:
  ResearchQuery query_;
  std::vector<std::string> reference_queries_;
  std::vector<ReferenceCriterion> reference_criteria_;
  QueryPlan generated_;
};

/// The six generation columns. Similarity, ROUGE and BLEU are fractions;
/// length_ratio is a percentage.
struct GenerationScores {
  double semantic_similarity = 0.0;
  double rouge_1 = 0.0;
  double rouge_2 = 0.0;
  double rouge_l = 0.0;
  double bleu = 0.0;
  double length_ratio = 0.0;
};

struct GenerationReport {
  std::vector<GenerationScores> per_item;
  GenerationScores mean;
};

inline std::string queries_text(const std::vector<std::string>& queries) {
  return join(queries, "\n");
}

inline std::string queries_text(const QueryPlan& plan) {
  std::vector<std::string> lines;
  for (const auto& q : plan.search_queries()) lines.push_back(boolquery::render(q));
  return queries_text(lines);
}

inline std::string criteria_text(const std::vector<ReferenceCriterion>& criteria) {
  std::vector<std::string> lines;
  for (const auto& c : criteria) lines.push_back(c.name + ": " + c.description);
  return join(lines, "\n");
}

inline std::string criteria_text(const QueryPlan& plan) {
  std::vector<ReferenceCriterion> items;
  for (const auto& c : plan.criteria()) items.push_back({c.name(), c.description()});
  return criteria_text(items);
}

/// All six metrics for one generated/reference text pair.
inline GenerationScores score_text(std::string_view generated, std::string_view reference,
                                   Embedder& embedder) {
  const auto g = tokenize(generated);
  const auto r = tokenize(reference);
  GenerationScores s;
  s.semantic_similarity = semantic_similarity(generated, reference, embedder);
  s.rouge_1 = rouge_n(g, r, 1).f1;
  s.rouge_2 = rouge_n(g, r, 2).f1;
  s.rouge_l = rouge_l(g, r).f1;
  s.bleu = bleu(g, {r});
  s.length_ratio = length_ratio(g, r);
  return s;
}

namespace detail {

template <typename F>
void each_column(GenerationScores& a, const GenerationScores& b, F f) {
  f(a.semantic_similarity, b.semantic_similarity);
  f(a.rouge_1, b.rouge_1);
  f(a.rouge_2, b.rouge_2);
  f(a.rouge_l, b.rouge_l);
  f(a.bleu, b.bleu);
  f(a.length_ratio, b.length_ratio);
}

inline GenerationScores average(const std::vector<GenerationScores>& xs) {
  GenerationScores sum;
  for (const auto& x : xs) each_column(sum, x, [](double& a, double b) { a += b; });
  const double n = static_cast<double>(xs.size());
  each_column(sum, sum, [n](double& a, double) { a /= n; });
  return sum;
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Left-aligned first column, right-aligned rest, two-space gutters.
inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      const std::string pad(width[c] - row[c].size(), ' ');
      line += c == 0 ? row[c] + pad : pad + row[c];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

}  // namespace detail

/// Per item: queries and criteria are scored as two texts and averaged; the
/// report is the macro average over items.
inline GenerationReport evaluate_generation(const std::vector<GenerationEvalItem>& items,
                                            Embedder& embedder) {
  if (items.empty()) throw InvalidValue("generation evaluation needs at least one item");
  GenerationReport report;
  for (const auto& item : items) {
    const auto q = score_text(queries_text(item.generated()),
                              queries_text(item.reference_queries()), embedder);
    const auto c = score_text(criteria_text(item.generated()),
                              criteria_text(item.reference_criteria()), embedder);
    report.per_item.push_back(detail::average({q, c}));
  }
  report.mean = detail::average(report.per_item);
  return report;
}

inline json encode(const GenerationScores& s) {
  return {{"semantic_similarity", s.semantic_similarity},
          {"rouge_1", s.rouge_1},
          {"rouge_2", s.rouge_2},
          {"rouge_l", s.rouge_l},
          {"bleu", s.bleu},
          {"length_ratio", s.length_ratio}};
}

inline json encode(const GenerationReport& r) {
  json items = json::array();
  for (const auto& s : r.per_item) items.push_back(encode(s));
  return {{"items", r.per_item.size()}, {"mean", encode(r.mean)}, {"per_item", items}};
}

/// Generation table: similarity, ROUGE and BLEU as percentages; one decimal.
inline std::string generation_table(const GenerationReport& r, const std::string& model) {
  const auto& m = r.mean;
  return detail::aligned_table(
      {{"Model", "Semantic Similarity", "ROUGE-1", "ROUGE-2", "ROUGE-L", "BLEU", "Length Ratio"},
       {model, detail::fixed(100 * m.semantic_similarity, 1), detail::fixed(100 * m.rouge_1, 1),
        detail::fixed(100 * m.rouge_2, 1), detail::fixed(100 * m.rouge_l, 1),
        detail::fixed(100 * m.bleu, 1), detail::fixed(m.length_ratio, 1)}});
}

// ---- matching ---------------------------------------------------------------

struct MatchingEvalItem {
  std::string query_id;
  std::string criterion_id;
  std::string paper_id;
  AssessmentVerdict gold;
  AssessmentVerdict predicted;
};

inline std::size_t verdict_index(AssessmentVerdict v) { return static_cast<std::size_t>(v); }

struct MatchingReport {
  /// confusion[gold][predicted], indexed in AssessmentVerdict order.
  std::array<std::array<std::size_t, 4>, 4> confusion{};
  /// Absent for categories with no gold items.
  std::map<AssessmentVerdict, std::optional<double>> per_category_accuracy;
  double overall_accuracy = 0.0;

  std::size_t gold_count(AssessmentVerdict v) const {
    std::size_t n = 0;
    for (auto c : confusion[verdict_index(v)]) n += c;
    return n;
  }
  std::size_t correct() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i) n += confusion[i][i];
    return n;
  }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : confusion) {
      for (auto c : row) n += c;
    }
    return n;
  }
};

inline MatchingReport evaluate_matching(const std::vector<MatchingEvalItem>& items) {
  if (items.empty()) throw InvalidValue("matching evaluation needs at least one item");
  MatchingReport r;
  for (const auto& it : items) ++r.confusion[verdict_index(it.gold)][verdict_index(it.predicted)];
  for (auto v : kAllVerdicts) {
    const auto n = r.gold_count(v);
    r.per_category_accuracy[v] =
        n == 0 ? std::nullopt
               : std::optional<double>(static_cast<double>(r.confusion[verdict_index(v)][verdict_index(v)]) /
                                       static_cast<double>(n));
  }
  r.overall_accuracy = static_cast<double>(r.correct()) / static_cast<double>(r.total());
  return r;
}

inline json encode(const MatchingReport& r) {
  json confusion = json::object();
  json acc = json::object();
  for (auto g : kAllVerdicts) {
    json row = json::object();
    for (auto p : kAllVerdicts) row[std::string(to_string(p))] = r.confusion[verdict_index(g)][verdict_index(p)];
    confusion[std::string(to_string(g))] = row;
    const auto& a = r.per_category_accuracy.at(g);
    acc[std::string(to_string(g))] = a ? json(*a) : json(nullptr);
  }
  return {{"confusion", confusion},
          {"per_category_accuracy", acc},
          {"overall_accuracy", r.overall_accuracy},
          {"correct", r.correct()},
          {"total", r.total()}};
}

/// Matching table: accuracies as percentages, two decimals, categories in
/// insufficient information, reject, somewhat support, support order.
inline std::string matching_table(const MatchingReport& r, const std::string& model) {
  const AssessmentVerdict order[] = {AssessmentVerdict::insufficient_information,
                                     AssessmentVerdict::reject,
                                     AssessmentVerdict::somewhat_support,
                                     AssessmentVerdict::support};
  std::vector<std::string> header{"Model"}, row{model};
  for (auto v : order) {
    std::string name(to_string(v));
    std::replace(name.begin(), name.end(), '_', ' ');
    header.push_back(name);
    const auto& a = r.per_category_accuracy.at(v);
    row.push_back(a ? detail::fixed(100 * *a, 2) : "n/a");
  }
  header.push_back("Overall Accuracy");
  row.push_back(detail::fixed(100 * r.overall_accuracy, 2));
  return detail::aligned_table({header, row});
}

// ---- dataset files ----------------------------------------------------------

struct GenerationReference {
  ResearchQuery query;
  std::vector<std::string> reference_queries;
  std::vector<ReferenceCriterion> reference_criteria;
};

struct MatchingLabel {
  std::string query_id;
  std::string criterion_id;
  std::string paper_id;
  AssessmentVerdict verdict;
};

namespace detail {

/// Calls f(json, line_no) for each non-blank line; errors name the line.
template <typename F>
void for_each_jsonl(const std::string& path, F f) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (unicode::trim_ascii(line).empty()) continue;
    try {
      f(json::parse(line), n);
    } catch (const std::exception& e) {
      throw InvalidValue(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

inline AssessmentVerdict get_verdict(const json& j, std::string_view key) {
  const auto s = jsonio::get_string(j, key);
  auto v = verdict_from_string(s);
  if (!v) throw InvalidValue("'" + s + "' is not an assessment verdict");
  return *v;
}

}  // namespace detail

/// One record per line: {query, timestamp, reference_search_queries[],
/// reference_criteria[{name, description}]}.
inline std::vector<GenerationReference> load_generation_dataset(const std::string& path) {
  std::vector<GenerationReference> out;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    std::vector<ReferenceCriterion> criteria;
    for (const auto& c : jsonio::get_array(j, "reference_criteria")) {
      criteria.push_back({jsonio::get_string(c, "name"), jsonio::get_string(c, "description")});
    }
    out.push_back({ResearchQuery(jsonio::get_string(j, "query"),
                                 Timestamp::parse(jsonio::get_string(j, "timestamp"))),
                   jsonio::get_string_list(j, "reference_search_queries"), std::move(criteria)});
  });
  return out;
}

/// One canonical QueryPlan per line, aligned with the dataset by position.
inline std::vector<QueryPlan> load_generated_plans(const std::string& path) {
  std::vector<QueryPlan> out;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    out.push_back(decode<QueryPlan>(j));
  });
  return out;
}

inline std::vector<GenerationEvalItem> generation_items(
    const std::vector<GenerationReference>& refs, const std::vector<QueryPlan>& plans) {
  if (refs.size() != plans.size()) {
    throw InvalidValue("dataset has " + std::to_string(refs.size()) + " records but outputs has " +
                       std::to_string(plans.size()));
  }
  std::vector<GenerationEvalItem> out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out.emplace_back(refs[i].query, refs[i].reference_queries, refs[i].reference_criteria,
                     plans[i]);
  }
  return out;
}

/// Lines of {query_id, criterion_id, paper_id, <key>}.
inline std::vector<MatchingLabel> load_matching_labels(const std::string& path,
                                                       std::string_view key) {
  std::vector<MatchingLabel> out;
  detail::for_each_jsonl(path, [&](const json& j, std::size_t) {
    out.push_back({jsonio::get_string(j, "query_id"), jsonio::get_string(j, "criterion_id"),
                   jsonio::get_string(j, "paper_id"), detail::get_verdict(j, key)});
  });
  return out;
}

/// Joins gold labels with predictions on (query_id, criterion_id, paper_id).
/// Every gold pair needs exactly one prediction; extra predictions are errors.
inline std::vector<MatchingEvalItem> matching_items(const std::vector<MatchingLabel>& gold,
                                                    const std::vector<MatchingLabel>& predicted) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, AssessmentVerdict> pred;
  for (const auto& p : predicted) {
    if (!pred.emplace(Key{p.query_id, p.criterion_id, p.paper_id}, p.verdict).second) {
      throw InvalidValue("duplicate prediction for (" + p.query_id + ", " + p.criterion_id +
                         ", " + p.paper_id + ")");
    }
  }
  std::vector<MatchingEvalItem> out;
  std::set<Key> seen;
  for (const auto& g : gold) {
    const Key k{g.query_id, g.criterion_id, g.paper_id};
    if (!seen.insert(k).second) {
      throw InvalidValue("duplicate gold label for (" + g.query_id + ", " + g.criterion_id +
                         ", " + g.paper_id + ")");
    }
    auto it = pred.find(k);
    if (it == pred.end()) {
      throw InvalidValue("no prediction for (" + g.query_id + ", " + g.criterion_id + ", " +
                         g.paper_id + ")");
    }
    out.push_back({g.query_id, g.criterion_id, g.paper_id, g.verdict, it->second});
  }
  if (pred.size() != gold.size()) {
    throw InvalidValue(std::to_string(pred.size() - gold.size()) +
                       " predictions have no gold label");
  }
  return out;
}

}  // namespace litscout::evalkit
