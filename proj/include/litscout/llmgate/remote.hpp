#pragma once

#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "litscout/llmgate/backend.hpp"

namespace litscout::llmgate {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

inline SplitUrl split_url(const std::string& url, std::string default_path = "/") {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigurationError("endpoint '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, std::move(default_path)};
  return {url.substr(0, path_start), url.substr(path_start)};
}

/// Chat-completion client (OpenAI wire format).
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(BackendConfig config)
      : config_(std::move(config)), limiter_(config_.max_in_flight) {
    config_.validate();
    url_ = split_url(*config_.endpoint, "/v1/chat/completions");
  }

  std::string complete(const PromptBundle& bundle) override {
    bundle.validate();
    auto guard = limiter_.acquire();
    const std::string body = request_body(bundle).dump();
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 1 && config_.retry_backoff.count() > 0) {
        std::this_thread::sleep_for(config_.retry_backoff * (attempt - 1));
      }
      httplib::Client client(url_.origin);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
          config_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      httplib::Headers headers;
      if (config_.api_key) {
        headers.emplace("Authorization", "Bearer " + *config_.api_key);
      }
      auto res = client.Post(url_.path, headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        throw ConfigurationError("backend rejected request with HTTP " +
                                 std::to_string(res->status) + ": " +
                                 res->body.substr(0, 500));
      }
      try {
        return response_text(nlohmann::json::parse(res->body));
      } catch (const std::exception& e) {
        last_error = std::string("malformed backend response: ") + e.what();
      }
    }
    throw RetryableError(last_error, config_.max_retries);
  }

  int max_attempts() const override { return config_.max_retries; }

 private:
  nlohmann::json request_body(const PromptBundle& b) const {
    nlohmann::json j = {
        {"model", config_.model_name},
        {"messages",
         {{{"role", "system"}, {"content", b.system}},
          {{"role", "user"}, {"content", b.user}}}},
        {"temperature", b.decoding.temperature},
        {"max_tokens", b.decoding.max_output_tokens}};
    if (b.decoding.seed) j["seed"] = *b.decoding.seed;
    return j;
  }

  static std::string response_text(const nlohmann::json& j) {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::runtime_error("content is not a string");
    return content.get<std::string>();
  }

  BackendConfig config_;
  SplitUrl url_;
  InFlightLimiter limiter_;
};

inline std::shared_ptr<Backend> make_backend(const BackendConfig& config) {
  config.validate();
  if (config.kind == BackendKind::mock) {
    return std::make_shared<MockBackend>(config.mock_script, config.max_retries,
                                         config.max_in_flight);
  }
  return std::make_shared<RemoteBackend>(config);
}

/// One-shot convenience over make_backend.
inline std::string complete(const PromptBundle& bundle, const BackendConfig& config) {
  return make_backend(config)->complete(bundle);
}

}  // namespace litscout::llmgate
