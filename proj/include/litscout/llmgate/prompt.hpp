#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "litscout/core/error.hpp"
#include "litscout/core/unicode.hpp"

namespace litscout::llmgate {

struct DecodingParams {
  double temperature = 0.0;
  int max_output_tokens = 2048;
  std::optional<std::int64_t> seed = 0;

  friend bool operator==(const DecodingParams&, const DecodingParams&) = default;
};

/// A two-part chat prompt plus decoding parameters.
struct PromptBundle {
  std::string system;
  std::string user;
  DecodingParams decoding;

  void validate() const {
    if (!unicode::has_visible_text(system)) {
      throw InvalidValue("prompt system text is empty");
    }
    if (!unicode::has_visible_text(user)) {
      throw InvalidValue("prompt user text is empty");
    }
    if (!(decoding.temperature >= 0.0)) {
      throw InvalidValue("temperature must be >= 0");
    }
    if (decoding.max_output_tokens <= 0) {
      throw InvalidValue("max_output_tokens must be positive");
    }
  }

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

/// Single-pass substitution of `{name}` placeholders. Substituted values are
/// never rescanned, and placeholders without a binding are left in place.
inline std::string render_template(
    std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string key(tmpl.substr(i + 1, close - i - 1));
        auto it = values.find(key);
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

/// `{identifier}` occurrences in `text`.
inline std::vector<std::string> unresolved_placeholders(std::string_view text) {
  static const std::regex pattern(R"(\{[A-Za-z_][A-Za-z0-9_]*\})");
  std::vector<std::string> out;
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), pattern);
       it != std::sregex_iterator(); ++it) {
    out.push_back(it->str());
  }
  return out;
}

}  // namespace litscout::llmgate
