#pragma once

#include <string>

#include <litscout/prompt_templates.hpp>

#include "litscout/core/types.hpp"
#include "litscout/llmgate/prompt.hpp"

namespace litscout::validator {

/// Positional tag name used for the i-th criterion (0-based) in the prompt.
inline std::string criterion_tag(std::size_t i) {
  return "criterion_" + std::to_string(i + 1);
}

inline std::string criteria_block(const CriteriaSet& criteria) {
  std::string out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (i) out += '\n';
    const auto tag = criterion_tag(i);
    out += "  <" + tag + ">" + criteria[i].description() + "</" + tag + ">";
  }
  return out;
}

inline llmgate::PromptBundle build_validation_prompt(const ResearchQuery& query,
                                                     const CriteriaSet& criteria,
                                                     const PaperMetadata& paper) {
  auto f = [&](PaperField field) { return field_text(paper, field); };
  llmgate::PromptBundle b;
  b.system = std::string(prompts::validation_system);
  b.user = llmgate::render_template(
      prompts::validation_user,
      {{"timestamp", query.timestamp().to_string()},
       {"user_query", query.text()},
       {"criteria_items", criteria_block(criteria)},
       {"paper_title", f(PaperField::title)},
       {"paper_authors", f(PaperField::authors)},
       {"paper_affiliations", f(PaperField::affiliations)},
       {"venue_name", f(PaperField::venue)},
       {"venue_type", f(PaperField::venue_type)},
       {"research_fields", f(PaperField::research_fields)},
       {"paper_doi", f(PaperField::doi)},
       {"publication_date", f(PaperField::publication_date)},
       {"paper_abstract", f(PaperField::abstract)},
       {"citation_count", f(PaperField::citation_count)},
       {"paper_url", f(PaperField::source_url)},
       {"assessment_taxonomy", std::string(prompts::assessment_taxonomy)},
       {"output_format", std::string(prompts::validation_output)}});
  return b;
}

}  // namespace litscout::validator
