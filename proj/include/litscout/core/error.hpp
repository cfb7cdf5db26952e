#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace litscout {

/// Stable machine-readable error categories. The string form is part of the
/// structured error body returned by the CLI and the HTTP service.
enum class ErrorCode {
  invalid_value,
  query_parse,
  validation,
  extraction,
  retryable,
  configuration,
  structured_output,
  edit,
  not_found,
  conflict,
  ingestion,
  load,
  io,
  rate_limited,
  undefined_ratio,
  source,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_value: return "invalid_value";
    case ErrorCode::query_parse: return "query_parse";
    case ErrorCode::validation: return "validation";
    case ErrorCode::extraction: return "extraction";
    case ErrorCode::retryable: return "retryable";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::structured_output: return "structured_output";
    case ErrorCode::edit: return "edit";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::ingestion: return "ingestion";
    case ErrorCode::load: return "load";
    case ErrorCode::io: return "io";
    case ErrorCode::rate_limited: return "rate_limited";
    case ErrorCode::undefined_ratio: return "undefined_ratio";
    case ErrorCode::source: return "source";
  }
  return "unknown";
}

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Structured form: {"code": ..., "message": ..., <details>}.
  virtual nlohmann::json to_json() const {
    return {{"code", std::string(to_string(code_))}, {"message", what()}};
  }

 private:
  ErrorCode code_;
};

/// A value failed its type invariants at construction.
class InvalidValue : public Error {
 public:
  explicit InvalidValue(std::string message)
      : Error(ErrorCode::invalid_value, std::move(message)) {}
};

class QueryParseError : public Error {
 public:
  QueryParseError(std::string message, std::size_t offset)
      : Error(ErrorCode::query_parse,
              message + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["offset"] = offset_;
    return j;
  }

 private:
  std::size_t offset_;
};

/// Carries every violated constraint, not just the first one, so that the
/// structured-output repair loop can name all of them at once.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations,
                           ErrorCode code = ErrorCode::validation)
      : Error(code, join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["violations"] = violations_;
    return j;
  }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& v : items) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out.empty() ? std::string("validation failed") : out;
  }

  std::vector<std::string> violations_;
};

class EditError : public ValidationError {
 public:
  explicit EditError(std::vector<std::string> violations)
      : ValidationError(std::move(violations), ErrorCode::edit) {}
};

class ExtractionError : public Error {
 public:
  ExtractionError(std::string message, std::string raw)
      : Error(ErrorCode::extraction, std::move(message)), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["raw"] = raw_;
    return j;
  }

 private:
  std::string raw_;
};

/// Transport failure or timeout; the caller may try again later.
class RetryableError : public Error {
 public:
  RetryableError(std::string message, int attempts)
      : Error(ErrorCode::retryable, std::move(message)), attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["attempts"] = attempts_;
    return j;
  }

 private:
  int attempts_;
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(std::string message)
      : Error(ErrorCode::configuration, std::move(message)) {}
};

/// Every attempt of a schema-guided generation failed validation.
class StructuredOutputError : public Error {
 public:
  explicit StructuredOutputError(std::vector<std::vector<std::string>> attempts)
      : Error(ErrorCode::structured_output,
              "no schema-conforming output after " +
                  std::to_string(attempts.size()) + " attempt(s)"),
        attempts_(std::move(attempts)) {}

  const std::vector<std::vector<std::string>>& attempt_violations()
      const noexcept {
    return attempts_;
  }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["attempts"] = attempts_;
    return j;
  }

 private:
  std::vector<std::vector<std::string>> attempts_;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(std::string message)
      : Error(ErrorCode::not_found, std::move(message)) {}
};

class ConflictError : public Error {
 public:
  explicit ConflictError(std::string message)
      : Error(ErrorCode::conflict, std::move(message)) {}
};

class IngestionError : public Error {
 public:
  explicit IngestionError(std::string message)
      : Error(ErrorCode::ingestion, std::move(message)) {}
};

class IoError : public Error {
 public:
  explicit IoError(std::string message)
      : Error(ErrorCode::io, std::move(message)) {}
};

/// A persisted log could not be replayed; `line` is 1-based.
class LoadError : public Error {
 public:
  LoadError(std::string path, std::size_t line, std::string message)
      : Error(ErrorCode::load, path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["path"] = path_;
    j["line"] = line_;
    return j;
  }

 private:
  std::string path_;
  std::size_t line_;
};

class UndefinedRatioError : public Error {
 public:
  explicit UndefinedRatioError(std::string message)
      : Error(ErrorCode::undefined_ratio, std::move(message)) {}
};

/// Failure of one external scholarly source.
class SourceError : public Error {
 public:
  SourceError(std::string source, std::string message)
      : Error(ErrorCode::source, source + ": " + message),
        source_(std::move(source)) {}

  const std::string& source() const noexcept { return source_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["source"] = source_;
    return j;
  }

 private:
  std::string source_;
};

class RateLimitedError : public Error {
 public:
  RateLimitedError(std::string source, std::chrono::milliseconds retry_after)
      : Error(ErrorCode::rate_limited,
              source + ": rate limit exhausted, retry after " +
                  std::to_string(retry_after.count()) + " ms"),
        source_(std::move(source)),
        retry_after_(retry_after) {}

  const std::string& source() const noexcept { return source_; }
  std::chrono::milliseconds retry_after() const noexcept { return retry_after_; }

  nlohmann::json to_json() const override {
    auto j = Error::to_json();
    j["source"] = source_;
    j["retry_after_ms"] = retry_after_.count();
    return j;
  }

 private:
  std::string source_;
  std::chrono::milliseconds retry_after_;
};

/// Structured body for any exception; non-library exceptions map to "internal".
inline nlohmann::json error_body(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return {{"error", err->to_json()}};
  }
  return {{"error", {{"code", "internal"}, {"message", e.what()}}}};
}

}  // namespace litscout
