#pragma once

// Canonical JSON form of the core types. Objects are key-sorted (nlohmann's
// default object type is an ordered std::map), absent optionals are written
// as null, and doubles use the shortest round-tripping representation, so
// canonical_serialize is deterministic and parse_canonical inverts it.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "litscout/boolquery/parser.hpp"
#include "litscout/boolquery/render.hpp"
#include "litscout/core/types.hpp"

namespace litscout {

using json = nlohmann::json;

namespace jsonio {

inline const json& require(const json& j, std::string_view key) {
  if (!j.is_object()) throw InvalidValue("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) {
    throw InvalidValue("missing field '" + std::string(key) + "'");
  }
  return *it;
}

inline bool present(const json& j, std::string_view key) {
  auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

inline std::string get_string(const json& j, std::string_view key) {
  const json& v = require(j, key);
  if (!v.is_string()) {
    throw InvalidValue("field '" + std::string(key) + "' must be a string");
  }
  return v.get<std::string>();
}

inline std::string get_string_or_empty(const json& j, std::string_view key) {
  return present(j, key) ? get_string(j, key) : std::string();
}

inline std::optional<std::string> get_opt_string(const json& j,
                                                 std::string_view key) {
  if (!present(j, key)) return std::nullopt;
  return get_string(j, key);
}

inline std::vector<std::string> get_string_list(const json& j,
                                                std::string_view key) {
  if (!present(j, key)) return {};
  const json& v = *j.find(key);
  if (!v.is_array()) {
    throw InvalidValue("field '" + std::string(key) + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw InvalidValue("field '" + std::string(key) +
                         "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

inline double get_number(const json& j, std::string_view key) {
  const json& v = require(j, key);
  if (!v.is_number()) {
    throw InvalidValue("field '" + std::string(key) + "' must be a number");
  }
  return v.get<double>();
}

inline std::int64_t get_integer(const json& j, std::string_view key) {
  const json& v = require(j, key);
  if (!v.is_number_integer()) {
    throw InvalidValue("field '" + std::string(key) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline bool get_bool(const json& j, std::string_view key) {
  const json& v = require(j, key);
  if (!v.is_boolean()) {
    throw InvalidValue("field '" + std::string(key) + "' must be a boolean");
  }
  return v.get<bool>();
}

inline const json& get_array(const json& j, std::string_view key) {
  const json& v = require(j, key);
  if (!v.is_array()) {
    throw InvalidValue("field '" + std::string(key) + "' must be an array");
  }
  return v;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace jsonio

// ---- encode ----------------------------------------------------------------

inline json encode(const boolquery::Query& q) { return boolquery::render(q); }

inline json encode(const ResearchQuery& q) {
  return {{"text", q.text()},
          {"timestamp", q.timestamp().to_string()},
          {"language_hint", jsonio::optional_json(q.language_hint())}};
}

inline json encode(const Criterion& c) {
  return {{"id", c.id()},
          {"kind", std::string(to_string(c.kind()))},
          {"name", c.name()},
          {"description", c.description()},
          {"weight", c.weight()}};
}

inline json encode(const CriteriaSet& s) {
  json arr = json::array();
  for (const auto& c : s) arr.push_back(encode(c));
  return arr;
}

inline json encode(const QueryPlan& p) {
  json queries = json::array();
  for (const auto& q : p.search_queries()) queries.push_back(encode(q));
  return {{"version", p.version()},
          {"search_queries", std::move(queries)},
          {"criteria", encode(p.criteria())},
          {"source_query", encode(p.source_query())}};
}

inline json encode(const PaperMetadata& p) {
  return {{"paper_id", p.paper_id},
          {"title", p.title},
          {"authors", p.authors},
          {"affiliations", p.affiliations},
          {"venue", p.venue},
          {"venue_type", p.venue_type},
          {"research_fields", p.research_fields},
          {"doi", jsonio::optional_json(p.doi)},
          {"publication_date", p.publication_date
                                   ? json(p.publication_date->to_string())
                                   : json(nullptr)},
          {"abstract", p.abstract},
          {"citation_count", jsonio::optional_json(p.citation_count)},
          {"source_url", jsonio::optional_json(p.source_url)}};
}

inline json encode(const EvidenceSpan& e) {
  return {{"source", e.source}, {"text", e.text}, {"verified", e.verified}};
}

inline json encode(const CriterionAssessment& a) {
  json ev = json::array();
  for (const auto& e : a.evidence) ev.push_back(encode(e));
  return {{"criterion_id", a.criterion_id},
          {"verdict", std::string(to_string(a.verdict))},
          {"explanation", a.explanation},
          {"evidence", std::move(ev)},
          {"low_confidence", a.low_confidence}};
}

inline json encode(const PaperVerdict& v) {
  json as = json::array();
  for (const auto& a : v.assessments) as.push_back(encode(a));
  return {{"paper_id", v.paper_id},
          {"classification", std::string(to_string(v.classification))},
          {"score", v.score},
          {"assessments", std::move(as)},
          {"summary", v.summary},
          {"error", v.error}};
}

template <typename T>
json encode(const std::vector<T>& items) {
  json arr = json::array();
  for (const auto& x : items) arr.push_back(encode(x));
  return arr;
}

// ---- decode ----------------------------------------------------------------

template <typename T>
T decode(const json& j);

template <>
inline boolquery::Query decode<boolquery::Query>(const json& j) {
  if (!j.is_string()) throw InvalidValue("search query must be a string");
  return boolquery::parse_query(j.get<std::string>());
}

template <>
inline ResearchQuery decode<ResearchQuery>(const json& j) {
  return ResearchQuery(jsonio::get_string(j, "text"),
                       Timestamp::parse(jsonio::get_string(j, "timestamp")),
                       jsonio::get_opt_string(j, "language_hint"));
}

template <>
inline Criterion decode<Criterion>(const json& j) {
  const auto kind_name = jsonio::get_string(j, "kind");
  auto kind = criterion_kind_from_string(kind_name);
  if (!kind) throw InvalidValue("unknown criterion kind '" + kind_name + "'");
  return Criterion(jsonio::get_string(j, "id"), *kind,
                   jsonio::get_string(j, "name"),
                   jsonio::get_string(j, "description"),
                   jsonio::get_number(j, "weight"));
}

template <>
inline CriteriaSet decode<CriteriaSet>(const json& j) {
  if (!j.is_array()) throw InvalidValue("criteria must be an array");
  std::vector<Criterion> items;
  for (const auto& c : j) items.push_back(decode<Criterion>(c));
  return CriteriaSet(std::move(items));
}

template <>
inline QueryPlan decode<QueryPlan>(const json& j) {
  std::vector<boolquery::Query> queries;
  for (const auto& q : jsonio::get_array(j, "search_queries")) {
    queries.push_back(decode<boolquery::Query>(q));
  }
  return QueryPlan(std::move(queries),
                   decode<CriteriaSet>(jsonio::require(j, "criteria")),
                   decode<ResearchQuery>(jsonio::require(j, "source_query")),
                   static_cast<int>(jsonio::get_integer(j, "version")));
}

template <>
inline PaperMetadata decode<PaperMetadata>(const json& j) {
  if (!j.is_object()) throw InvalidValue("paper record must be an object");
  PaperMetadata p;
  p.paper_id = jsonio::get_string_or_empty(j, "paper_id");
  p.title = jsonio::get_string(j, "title");
  p.authors = jsonio::get_string_list(j, "authors");
  p.affiliations = jsonio::get_string_list(j, "affiliations");
  p.venue = jsonio::get_string_or_empty(j, "venue");
  p.venue_type = jsonio::get_string_or_empty(j, "venue_type");
  p.research_fields = jsonio::get_string_list(j, "research_fields");
  p.doi = jsonio::get_opt_string(j, "doi");
  if (auto d = jsonio::get_opt_string(j, "publication_date")) {
    p.publication_date = Date::parse(*d);
  }
  p.abstract = jsonio::get_string_or_empty(j, "abstract");
  if (jsonio::present(j, "citation_count")) {
    p.citation_count = jsonio::get_integer(j, "citation_count");
  }
  p.source_url = jsonio::get_opt_string(j, "source_url");
  p.validate();
  return p;
}

template <>
inline EvidenceSpan decode<EvidenceSpan>(const json& j) {
  EvidenceSpan e{jsonio::get_string(j, "source"), jsonio::get_string(j, "text"),
                 jsonio::get_bool(j, "verified")};
  if (e.text.empty()) throw InvalidValue("evidence text is empty");
  return e;
}

template <>
inline CriterionAssessment decode<CriterionAssessment>(const json& j) {
  CriterionAssessment a;
  a.criterion_id = jsonio::get_string(j, "criterion_id");
  const auto v = jsonio::get_string(j, "verdict");
  auto verdict = verdict_from_string(v);
  if (!verdict) throw InvalidValue("unknown verdict '" + v + "'");
  a.verdict = *verdict;
  a.explanation = jsonio::get_string(j, "explanation");
  for (const auto& e : jsonio::get_array(j, "evidence")) {
    a.evidence.push_back(decode<EvidenceSpan>(e));
  }
  a.low_confidence = jsonio::get_bool(j, "low_confidence");
  return a;
}

template <>
inline PaperVerdict decode<PaperVerdict>(const json& j) {
  PaperVerdict v;
  v.paper_id = jsonio::get_string(j, "paper_id");
  const auto c = jsonio::get_string(j, "classification");
  auto cls = classification_from_string(c);
  if (!cls) throw InvalidValue("unknown classification '" + c + "'");
  v.classification = *cls;
  v.score = jsonio::get_number(j, "score");
  if (!(v.score >= 0.0 && v.score <= 1.0)) {
    throw InvalidValue("score must lie in [0, 1]");
  }
  for (const auto& a : jsonio::get_array(j, "assessments")) {
    v.assessments.push_back(decode<CriterionAssessment>(a));
  }
  v.summary = jsonio::get_string(j, "summary");
  v.error = jsonio::get_bool(j, "error");
  return v;
}

template <typename T>
std::vector<T> decode_list(const json& j) {
  if (!j.is_array()) throw InvalidValue("expected a JSON array");
  std::vector<T> out;
  for (const auto& x : j) out.push_back(decode<T>(x));
  return out;
}

/// Deterministic, key-sorted, compact UTF-8 JSON.
template <typename T>
std::string canonical_serialize(const T& value) {
  return encode(value).dump();
}

template <typename T>
T parse_canonical(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidValue(std::string("malformed JSON: ") + e.what());
  }
  return decode<T>(j);
}

}  // namespace litscout
