#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "litscout/evalkit/tokenize.hpp"
#include "litscout/llmgate/remote.hpp"

namespace litscout::evalkit {

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(std::string_view text) = 0;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// Offline embedder: unigram and bigram counts hashed (FNV-1a) into a fixed
/// number of buckets, then L2-normalized. Bigrams hash as "a\x1fb".
class HashedEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultBuckets = 1024;

  explicit HashedEmbedder(std::size_t buckets = kDefaultBuckets) : buckets_(buckets) {
    if (buckets_ == 0) throw ConfigurationError("embedder needs at least one bucket");
  }

  std::size_t bucket_of(std::string_view feature) const { return fnv1a64(feature) % buckets_; }

  std::vector<std::string> features(std::string_view text) const {
    const auto toks = tokenize(text);
    std::vector<std::string> out(toks.begin(), toks.end());
    for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.push_back(toks[i] + '\x1f' + toks[i + 1]);
    return out;
  }

  std::vector<double> embed(std::string_view text) override {
    std::vector<double> v(buckets_, 0.0);
    for (const auto& f : features(text)) v[bucket_of(f)] += 1.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
    }
    return v;
  }

 private:
  std::size_t buckets_;
};

/// Embeddings endpoint in the OpenAI wire format. Failures throw; there is no
/// fallback to the offline embedder.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(std::string endpoint, std::string model, std::optional<std::string> api_key,
                 std::chrono::milliseconds timeout = std::chrono::seconds(30))
      : url_(llmgate::split_url(endpoint, "/v1/embeddings")),
        model_(std::move(model)),
        api_key_(std::move(api_key)),
        timeout_(timeout) {}

  std::vector<double> embed(std::string_view text) override {
    httplib::Client client(url_.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);
    const nlohmann::json body = {{"model", model_}, {"input", std::string(text)}};
    auto res = client.Post(url_.path, headers, body.dump(), "application/json");
    if (!res) {
      throw RetryableError("embedding transport error: " + httplib::to_string(res.error()), 1);
    }
    if (res->status < 200 || res->status >= 300) {
      throw RetryableError("embedding endpoint returned HTTP " + std::to_string(res->status), 1);
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      return j.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const std::exception& e) {
      throw RetryableError(std::string("malformed embedding response: ") + e.what(), 1);
    }
  }

 private:
  llmgate::SplitUrl url_;
  std::string model_;
  std::optional<std::string> api_key_;
  std::chrono::milliseconds timeout_;
};

/// Cosine similarity; 0 when either vector is zero.
inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidValue("embedding dimensions differ");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

inline double semantic_similarity(std::string_view a, std::string_view b, Embedder& embedder) {
  return cosine(embedder.embed(a), embedder.embed(b));
}

}  // namespace litscout::evalkit
