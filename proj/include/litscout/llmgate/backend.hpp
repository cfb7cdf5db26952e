#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "litscout/core/error.hpp"
#include "litscout/llmgate/prompt.hpp"

namespace litscout::llmgate {

/// Lowercase hex SHA-256 over system bytes, one NUL, then user bytes.
/// Decoding parameters are not part of the digest.
inline std::string prompt_digest(std::string_view system, std::string_view user) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw ConfigurationError("OpenSSL digest unavailable");
  const char sep = '\0';
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, system.data(), system.size()) == 1 &&
                  EVP_DigestUpdate(ctx, &sep, 1) == 1 &&
                  EVP_DigestUpdate(ctx, user.data(), user.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw ConfigurationError("SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xF]);
  }
  return out;
}

inline std::string prompt_digest(const PromptBundle& bundle) {
  return prompt_digest(bundle.system, bundle.user);
}

/// Scripted responses keyed by prompt digest. On disk this is a JSON object
/// mapping digests to response text; the reserved key "default" holds the
/// fallback response.
struct MockScript {
  std::map<std::string, std::string> responses;
  std::optional<std::string> fallback;

  void add(const PromptBundle& bundle, std::string response) {
    responses[prompt_digest(bundle)] = std::move(response);
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : responses) j[k] = v;
    if (fallback) j["default"] = *fallback;
    return j;
  }

  static MockScript from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
      throw ConfigurationError("mock script must be a JSON object");
    }
    MockScript s;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!it.value().is_string()) {
        throw ConfigurationError("mock script entry '" + it.key() +
                                 "' must be a string");
      }
      if (it.key() == "default") {
        s.fallback = it.value().get<std::string>();
      } else {
        s.responses[it.key()] = it.value().get<std::string>();
      }
    }
    return s;
  }

  static MockScript load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read mock script '" + path + "'");
    try {
      return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigurationError("malformed mock script '" + path +
                               "': " + e.what());
    }
  }
};

enum class BackendKind { remote, mock };

struct BackendConfig {
  BackendKind kind = BackendKind::mock;
  std::optional<std::string> endpoint;
  std::string model_name = "mock";
  std::optional<std::string> api_key;
  std::chrono::milliseconds timeout{60'000};
  /// Upper bound on attempts, for both transport retries and the
  /// structured-output repair loop.
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff{250};
  std::size_t max_in_flight = 4;
  std::shared_ptr<const MockScript> mock_script;

  void validate() const {
    if (max_retries < 1 || max_retries > 5) {
      throw ConfigurationError("max_retries must lie in [1, 5]");
    }
    if (max_in_flight < 1) {
      throw ConfigurationError("max_in_flight must be positive");
    }
    if (kind == BackendKind::remote && (!endpoint || endpoint->empty())) {
      throw ConfigurationError("remote backend requires an endpoint");
    }
    if (kind == BackendKind::mock && !mock_script) {
      throw ConfigurationError("mock backend requires a script");
    }
  }

  /// LITSCOUT_MOCK_SCRIPT selects the mock backend; otherwise
  /// LITSCOUT_BACKEND_URL / LITSCOUT_API_KEY / LITSCOUT_MODEL configure the
  /// remote one.
  static BackendConfig from_env() {
    BackendConfig c;
    auto env = [](const char* name) -> std::optional<std::string> {
      const char* v = std::getenv(name);
      if (v == nullptr || *v == '\0') return std::nullopt;
      return std::string(v);
    };
    if (auto script = env("LITSCOUT_MOCK_SCRIPT")) {
      c.kind = BackendKind::mock;
      c.mock_script = std::make_shared<MockScript>(MockScript::load(*script));
      return c;
    }
    c.kind = BackendKind::remote;
    c.endpoint = env("LITSCOUT_BACKEND_URL");
    c.api_key = env("LITSCOUT_API_KEY");
    c.model_name = env("LITSCOUT_MODEL").value_or("gpt-4o");
    if (!c.endpoint) {
      throw ConfigurationError(
          "no backend configured: set LITSCOUT_BACKEND_URL or "
          "LITSCOUT_MOCK_SCRIPT");
    }
    return c;
  }
};

/// A text-generation backend. Implementations are safe to call from several
/// threads at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const PromptBundle& bundle) = 0;
  virtual int max_attempts() const = 0;
};

/// Bounds the number of concurrent calls into a backend.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(std::size_t limit)
      : sem_(static_cast<std::ptrdiff_t>(limit)) {}

  class Guard {
   public:
    explicit Guard(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
    ~Guard() { s_.release(); }
    Guard(const Guard&) = delete;
    Guard& operator=(const Guard&) = delete;

   private:
    std::counting_semaphore<1024>& s_;
  };

  Guard acquire() { return Guard(sem_); }

 private:
  std::counting_semaphore<1024> sem_;
};

class MockBackend final : public Backend {
 public:
  explicit MockBackend(std::shared_ptr<const MockScript> script,
                       int max_attempts = 3, std::size_t max_in_flight = 4)
      : script_(std::move(script)),
        max_attempts_(max_attempts),
        limiter_(max_in_flight) {
    if (!script_) throw ConfigurationError("mock backend requires a script");
  }

  std::string complete(const PromptBundle& bundle) override {
    bundle.validate();
    auto guard = limiter_.acquire();
    calls_.fetch_add(1, std::memory_order_relaxed);
    const auto digest = prompt_digest(bundle);
    auto it = script_->responses.find(digest);
    if (it != script_->responses.end()) return it->second;
    if (script_->fallback) return *script_->fallback;
    throw ConfigurationError("mock script has no entry for prompt digest " +
                             digest + " and no default");
  }

  int max_attempts() const override { return max_attempts_; }

  std::size_t calls() const noexcept {
    return calls_.load(std::memory_order_relaxed);
  }

 private:
  std::shared_ptr<const MockScript> script_;
  int max_attempts_;
  InFlightLimiter limiter_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace litscout::llmgate
