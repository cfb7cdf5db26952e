#pragma once

#include <string>

#include "litscout/core/types.hpp"
#include "litscout/core/unicode.hpp"

namespace litscout {

/// Identity used for deduplication: the lowercased DOI when one is present,
/// otherwise the NFKC-normalized lowercase title reduced to alphanumerics.
inline std::string normalize_paper_key(const PaperMetadata& paper) {
  if (paper.doi) {
    std::string doi = unicode::trim_ascii(*paper.doi);
    if (!doi.empty()) {
      for (char& c : doi) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
      }
      return doi;
    }
  }
  return unicode::alnum_key(paper.title);
}

/// Title projection used in result tie-breaks.
inline std::string normalized_title(const PaperMetadata& paper) {
  return unicode::alnum_key(paper.title);
}

}  // namespace litscout
