#pragma once

// Deterministic fixture: the burnout research query and its three-criterion
// plan, a 30-paper corpus that every plan query reaches, and a mock script
// whose validation responses yield a known Perfect/Partial/No partition.

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "litscout/llmgate/backend.hpp"
#include "litscout/llmgate/structured.hpp"
#include "litscout/planner/plan.hpp"
#include "litscout/validator/assessments.hpp"
#include "litscout/validator/prompt.hpp"

namespace litscout::testing {

inline ResearchQuery burnout_query() {
  return ResearchQuery(
      "I am looking for articles that show how embedding psychologists into "
      "subspecialty medical teams reduce medical provider's level of burnout.",
      Timestamp::parse("2025-06-01T09:00:00Z"));
}

inline nlohmann::json burnout_plan_json() {
  return {
      {"search_queries",
       {R"("embedded psychologist" AND "subspecialty medical team" AND burnout)",
        R"("psychologist integration" AND "medical team" burnout)",
        "psychologist embedded medical team burnout"}},
      {"criteria",
       {{{"type", "task"},
         {"name", "Embedded psychologists"},
         {"description",
          "The paper examines the integration or embedding of psychologists."},
         {"weight", 0.4}},
        {{"type", "task"},
         {"name", "Subspecialty medical teams"},
         {"description", "The paper is within subspecialty medical teams."},
         {"weight", 0.3}},
        {{"type", "task"},
         {"name", "Impact on burnout reduction"},
         {"description",
          "The paper presents evidence or findings on the effect of embedded "
          "psychologists on reducing burnout among medical providers."},
         {"weight", 0.3}}}}};
}

/// The raw model output scripted for the plan prompt: prose around a fence.
inline std::string burnout_plan_response() {
  return "Here is the plan.\n```json\n" + burnout_plan_json().dump(2) + "\n```\n";
}

inline QueryPlan burnout_plan() {
  return planner::parse_plan(burnout_plan_json(), burnout_query());
}

/// How a fixture paper's validation call behaves.
enum class Script {
  normal,          // one valid response
  repair,          // invalid first, valid after the repair instruction
  always_invalid,  // every attempt invalid
  unscripted,      // no entry: the backend call itself fails
};

struct FixturePaper {
  PaperMetadata paper;
  /// One letter per criterion: S support, W somewhat_support,
  /// I insufficient_information, R reject. Empty for failing papers.
  std::string verdicts;
  Script script = Script::normal;
};

namespace detail {

inline const std::vector<std::string>& settings() {
  static const std::vector<std::string> s = {
      "pediatric oncology", "cardiology",        "nephrology",
      "rheumatology",       "neurology",         "gastroenterology",
      "pulmonology",        "endocrinology",     "palliative care",
      "transplant surgery", "hematology",        "dermatology",
      "geriatric medicine", "infectious disease", "obstetrics",
  };
  return s;
}

inline std::string sentence(std::size_t i, std::size_t k) {
  const auto& setting = settings()[i % settings().size()];
  switch (k) {
    case 0:
      return "A psychologist was embedded in the " + setting +
             " medical team for twelve months.";
    case 1:
      return "The " + setting + " service is a subspecialty clinic with " +
             std::to_string(8 + i) + " physicians and nurses.";
    case 2:
      return "Provider burnout scores fell after the embedded psychologist "
             "began weekly sessions.";
    default:
      return "Team members reported on workload, burnout and collaboration.";
  }
}

inline std::string abstract_for(std::size_t i) {
  return sentence(i, 0) + " " + sentence(i, 1) + " " + sentence(i, 2) + " " +
         sentence(i, 3);
}

// Evidence span for criterion k of paper i with the given verdict letter.
inline nlohmann::json evidence_for(std::size_t i, std::size_t k, char verdict,
                                   const PaperMetadata& p) {
  using nlohmann::json;
  if (verdict == 'I') return json::array();
  if (verdict == 'R') return json::array({{{"source", "title"}, {"text", p.title}}});
  std::string text = sentence(i, k);
  if (verdict == 'W') text = text.substr(0, text.size() / 2);
  // Occasional quirks a model produces: wrapped lines, a paraphrase.
  if (i % 7 == 3) {
    auto pos = text.find(' ');
    if (pos != std::string::npos) text.replace(pos, 1, "\n   ");
  }
  if (i % 11 == 5 && verdict == 'W') text = "the team had access to a counsellor";
  return json::array({{{"source", i % 2 ? "abstract" : "Abstract"}, {"text", text}}});
}

inline nlohmann::json criterion_ref(std::size_t i, std::size_t k, const CriteriaSet& c) {
  switch (i % 3) {
    case 0: return validator::criterion_tag(k);
    case 1: return c[k].id();
    default: return static_cast<int>(k + 1);
  }
}

inline std::string verdict_name(char v) {
  switch (v) {
    case 'S': return "support";
    case 'W': return "somewhat_support";
    case 'I': return "insufficient_information";
    default: return "reject";
  }
}

}  // namespace detail

/// The 30 fixture papers. Verdict letters give the intended partition:
/// 3 Perfect, 5 Partial and 22 No (two of which fail validation outright).
inline std::vector<FixturePaper> fixture_papers() {
  struct Row {
    const char* verdicts;
    Script script;
  };
  static const Row rows[30] = {
      {"SSS", Script::normal},   {"SWS", Script::normal},
      {"III", Script::normal},   {"RRR", Script::normal},
      {"SSS", Script::repair},   {"WIR", Script::normal},
      {"SSW", Script::normal},   {"RWI", Script::normal},
      {"", Script::unscripted},  {"RRS", Script::normal},
      {"WSS", Script::normal},   {"RSR", Script::normal},
      {"III", Script::normal},   {"SIR", Script::normal},
      {"RRR", Script::normal},   {"", Script::always_invalid},
      {"WIR", Script::normal},   {"SSS", Script::normal},
      {"RWI", Script::normal},   {"RSW", Script::normal},
      {"RRS", Script::normal},   {"IIR", Script::normal},
      {"RSR", Script::normal},   {"RRI", Script::normal},
      {"WRR", Script::normal},   {"IRW", Script::normal},
      {"III", Script::normal},   {"RRR", Script::normal},
      {"IIR", Script::normal},   {"RRI", Script::normal},
  };
  static const char* const venues[] = {"Journal of Clinical Psychology in Medical Settings",
                                       "Families, Systems, & Health",
                                       "BMC Health Services Research"};
  std::vector<FixturePaper> out;
  for (std::size_t i = 0; i < 30; ++i) {
    PaperMetadata p;
    char id[8];
    std::snprintf(id, sizeof id, "fx%02zu", i + 1);
    p.paper_id = id;
    const auto& setting = detail::settings()[i % detail::settings().size()];
    p.title = (i < 15 ? "Embedded psychologist and burnout in a " + setting +
                            " medical team"
                      : "Burnout in " + setting + " teams: a medical psychologist " +
                            "embedded study " + std::to_string(i - 14));
    p.authors = {"A. Author" + std::to_string(i % 5), "B. Writer" + std::to_string(i % 3)};
    p.affiliations = {"University Hospital " + std::to_string(i % 4 + 1)};
    p.venue = venues[i % 3];
    p.venue_type = "journal";
    p.research_fields = {"Psychology", "Medicine"};
    if (i % 4 != 2) p.doi = "10.5555/fixture." + std::to_string(1000 + i);
    p.publication_date = Date(2015 + static_cast<int>(i % 10), static_cast<int>(i % 12) + 1, 15);
    p.abstract = detail::abstract_for(i);
    // Distinct except for one deliberate tie pair to exercise title order.
    p.citation_count = (i == 1 || i == 6) ? 40 : static_cast<std::int64_t>((i * 37) % 97);
    if (i % 5 != 4) p.source_url = "https://example.org/papers/" + std::string(id);
    out.push_back({std::move(p), rows[i].verdicts, rows[i].script});
  }
  return out;
}

inline std::vector<PaperMetadata> fixture_corpus() {
  std::vector<PaperMetadata> out;
  for (auto& f : fixture_papers()) out.push_back(std::move(f.paper));
  return out;
}

/// The scripted validation response for a fixture paper.
inline nlohmann::json validation_response(std::size_t i, const FixturePaper& f,
                                          const CriteriaSet& criteria) {
  using nlohmann::json;
  json entries = json::array();
  for (std::size_t k = 0; k < f.verdicts.size(); ++k) {
    const char v = f.verdicts[k];
    entries.push_back(
        {{"criterion_id", detail::criterion_ref(i, k, criteria)},
         {"assessment", detail::verdict_name(v)},
         {"explanation", v == 'S'   ? "The abstract directly addresses this criterion."
                         : v == 'W' ? "The abstract addresses this criterion only in part."
                         : v == 'I' ? "The metadata neither confirms nor contradicts it."
                                    : "The paper does not meet this criterion."},
         {"evidence", detail::evidence_for(i, k, v, f.paper)}});
  }
  return {{"criteria_assessment", std::move(entries)},
          {"summary", "Fixture assessment for " + f.paper.title + "."}};
}

/// Violations parse_assessments reports for `bad`.
inline std::vector<std::string> violations_of(const nlohmann::json& bad,
                                              const CriteriaSet& criteria) {
  try {
    validator::parse_assessments(bad, criteria);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  throw std::logic_error("fixture response expected to be invalid");
}

/// Script for the full fixture: the plan prompt plus one entry per scripted
/// validation call.
inline llmgate::MockScript fixture_script() {
  llmgate::MockScript s;
  const auto query = burnout_query();
  s.add(planner::build_plan_prompt(query), burnout_plan_response());
  const auto plan = burnout_plan();
  const auto& criteria = plan.criteria();
  const auto papers = fixture_papers();
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& f = papers[i];
    const auto prompt = validator::build_validation_prompt(query, criteria, f.paper);
    switch (f.script) {
      case Script::normal:
        s.add(prompt, validation_response(i, f, criteria).dump());
        break;
      case Script::repair: {
        auto bad = validation_response(i, f, criteria);
        bad.erase("summary");
        s.add(prompt, "Sure:\n" + bad.dump());
        auto repaired = prompt;
        repaired.user += llmgate::repair_instruction(violations_of(bad, criteria));
        s.add(repaired, validation_response(i, f, criteria).dump(2));
        break;
      }
      case Script::always_invalid: {
        FixturePaper copy = f;
        copy.verdicts = "SSS";
        auto bad = validation_response(i, copy, criteria);
        bad["criteria_assessment"][0]["assessment"] = "maybe";
        s.add(prompt, bad.dump());
        auto repaired = prompt;
        repaired.user += llmgate::repair_instruction(violations_of(bad, criteria));
        s.add(repaired, bad.dump());
        break;
      }
      case Script::unscripted:
        break;
    }
  }
  return s;
}

// ---- the two-criterion remote-work validation example ----------------------

inline ResearchQuery remote_work_query() {
  return ResearchQuery(
      "Find a paper that argues remote workers who received limited feedback "
      "from supervisors experienced lower levels of motivation and job "
      "satisfaction and suggests that regular, constructive feedback is "
      "critical for maintaining engagement and enhancing employees' "
      "psychological well-being in remote work environments.",
      Timestamp::parse("2025-06-01T09:00:00Z"));
}

inline CriteriaSet remote_work_criteria() {
  return CriteriaSet({
      Criterion("c1", CriterionKind::task, "Limited supervisor feedback",
                "The paper examines the effects of limited feedback from "
                "supervisors on remote workers' motivation and job satisfaction.",
                0.5),
      Criterion("c2", CriterionKind::task, "Value of constructive feedback",
                "The paper argues that regular, constructive feedback is critical "
                "for maintaining engagement and enhancing employees' psychological "
                "well-being in remote work environments.",
                0.5),
  });
}

inline PaperMetadata remote_work_paper() {
  PaperMetadata p;
  p.paper_id = "remote-work";
  p.title = "Organization of remote work in the context of digitalization";
  p.authors = {"Anna Sheveleva", "Evgeny Rogov"};
  p.venue = "Developmental Psychology";
  p.venue_type = "journal";
  p.publication_date = Date(2021, 1, 1);
  p.abstract =
      "Individual-personal effects are connected with professional's "
      "personality transformation under influence environment digitalization: "
      "a change emotional side experiencing lack information about colleagues' "
      "work, feedback their role overall result. Organizational managerial "
      "associated implementation regulation, control assessment, staff "
      "motivation, forms employment, membership commitment, job satisfaction.";
  return p;
}

inline nlohmann::json remote_work_response() {
  return {
      {"criteria_assessment",
       {{{"criterion_id", "criterion_1"},
         {"assessment", "support"},
         {"explanation",
          "The abstract discusses job satisfaction and motivation in remote work."},
         {"evidence",
          {{{"source", "abstract"},
            {"text", "staff motivation, forms employment, membership commitment, "
                     "job satisfaction"}}}}},
        {{"criterion_id", "criterion_2"},
         {"assessment", "somewhat_support"},
         {"explanation",
          "A lack of feedback is mentioned, but no argument for regular feedback."},
         {"evidence",
          {{{"source", "abstract"},
            {"text", "experiencing lack information about colleagues' work, "
                     "feedback their role overall result"}}}}}}},
      {"summary", "Partially relevant: feedback is mentioned only indirectly."}};
}

/// Plan wrapper so the remote-work example can run through the pipeline.
inline QueryPlan remote_work_plan() {
  return QueryPlan({boolquery::parse_query("remote work feedback"),
                    boolquery::parse_query("\"job satisfaction\" remote")},
                   remote_work_criteria(), remote_work_query());
}

inline llmgate::MockScript remote_work_script() {
  llmgate::MockScript s;
  s.add(validator::build_validation_prompt(remote_work_query(), remote_work_criteria(),
                                           remote_work_paper()),
        remote_work_response().dump());
  return s;
}

}  // namespace litscout::testing
