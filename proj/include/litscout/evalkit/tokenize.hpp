#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "litscout/core/unicode.hpp"

namespace litscout::evalkit {

/// Lowercased word tokens. Runs of letters, digits and combining marks form a
/// token; whitespace and punctuation separate tokens; every CJK ideograph is a
/// token on its own. Input is NFKC-normalized first so full-width forms fold
/// onto their ASCII counterparts.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  unicode::for_each_code_point(unicode::nfkc(text), [&](UChar32 c) {
    if (unicode::is_ideograph(c)) {
      flush();
      std::string single;
      unicode::append_utf8(single, c);
      tokens.push_back(std::move(single));
    } else if (unicode::is_word_char(c)) {
      unicode::append_utf8(current, u_tolower(c));
    } else {
      flush();
    }
  });
  flush();
  return tokens;
}

}  // namespace litscout::evalkit
