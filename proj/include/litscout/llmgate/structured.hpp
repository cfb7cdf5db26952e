#pragma once

#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <nlohmann/json.hpp>

#include "litscout/core/error.hpp"
#include "litscout/llmgate/backend.hpp"

namespace litscout::llmgate {

namespace detail {

// End of the balanced object opening at `start`, or npos. Braces inside JSON
// strings are ignored.
inline std::size_t balanced_end(std::string_view s, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::string_view::npos;
}

}  // namespace detail

/// First balanced top-level JSON object in model output. Code fences and
/// surrounding prose are skipped because scanning starts at each '{' in turn.
inline nlohmann::json extract_structured(std::string_view raw) {
  if (raw.empty()) throw ExtractionError("model output is empty", std::string(raw));
  for (std::size_t i = raw.find('{'); i != std::string_view::npos;
       i = raw.find('{', i + 1)) {
    const std::size_t end = detail::balanced_end(raw, i);
    if (end == std::string_view::npos) continue;
    auto parsed = nlohmann::json::parse(raw.substr(i, end - i + 1), nullptr,
                                        /*allow_exceptions=*/false);
    if (parsed.is_object()) return parsed;
  }
  throw ExtractionError("no balanced JSON object in model output", std::string(raw));
}

inline std::string repair_instruction(const std::vector<std::string>& violations) {
  std::string out =
      "\n\nYour previous response could not be accepted for these reasons:\n";
  for (const auto& v : violations) out += "- " + v + "\n";
  out +=
      "Respond again with a single JSON object in the expected output format "
      "that fixes every problem listed above.";
  return out;
}

template <typename T>
struct Generated {
  T value;
  int attempts = 0;
};

/// complete -> extract_structured -> check, reissuing the prompt with a repair
/// instruction after each rejected attempt. `check` maps the extracted object
/// to a value or throws ValidationError / InvalidValue.
template <typename Check>
auto generate_with_schema(const PromptBundle& bundle, Backend& backend, Check&& check,
                          int max_attempts)
    -> Generated<std::decay_t<std::invoke_result_t<Check&, const nlohmann::json&>>> {
  if (max_attempts < 1) throw ConfigurationError("max_attempts must be >= 1");
  std::vector<std::vector<std::string>> history;
  PromptBundle current = bundle;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const std::string raw = backend.complete(current);
    std::vector<std::string> violations;
    try {
      auto value = check(extract_structured(raw));
      return {std::move(value), attempt};
    } catch (const ValidationError& e) {
      violations = e.violations();
    } catch (const ExtractionError& e) {
      violations = {"the response did not contain a JSON object"};
    } catch (const InvalidValue& e) {
      violations = {e.what()};
    }
    history.push_back(violations);
    current.user = bundle.user + repair_instruction(violations);
  }
  throw StructuredOutputError(std::move(history));
}

template <typename Check>
auto generate_with_schema(const PromptBundle& bundle, Backend& backend, Check&& check) {
  return generate_with_schema(bundle, backend, std::forward<Check>(check),
                              backend.max_attempts());
}

}  // namespace litscout::llmgate
