#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "litscout/core/types.hpp"

namespace litscout::evalkit {

/// 1 when the predicted verdict agrees with the expert label, else 0.
inline int reward(AssessmentVerdict predicted, AssessmentVerdict gold) {
  return predicted == gold ? 1 : 0;
}

/// Rewards of the G candidates sampled for one prompt.
class RewardGroup {
 public:
  explicit RewardGroup(std::vector<double> rewards) : rewards_(std::move(rewards)) {
    if (rewards_.size() < 2) throw InvalidValue("a reward group needs at least 2 rewards");
    for (double r : rewards_) {
      if (!std::isfinite(r)) throw InvalidValue("rewards must be finite");
    }
  }

  const std::vector<double>& rewards() const noexcept { return rewards_; }
  std::size_t size() const noexcept { return rewards_.size(); }

 private:
  std::vector<double> rewards_;
};

/// (r - mean) / std with population statistics. A group whose rewards are all
/// equal gets zero advantages.
inline std::vector<double> group_advantages(const RewardGroup& group) {
  const auto& r = group.rewards();
  const double g = static_cast<double>(r.size());
  std::vector<double> out(r.size(), 0.0);
  if (std::all_of(r.begin(), r.end(), [&](double x) { return x == r.front(); })) return out;
  double mean = 0.0;
  for (double x : r) mean += x;
  mean /= g;
  double var = 0.0;
  for (double x : r) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / g);
  if (sd == 0.0) return out;
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = (r[i] - mean) / sd;
  return out;
}

inline std::vector<double> group_advantages(std::vector<double> rewards) {
  return group_advantages(RewardGroup(std::move(rewards)));
}

/// Per-token advantages: candidate i's advantage repeated over its tokens.
inline std::vector<std::vector<double>> token_advantages(
    const std::vector<double>& advantages, const std::vector<std::size_t>& token_counts) {
  if (advantages.size() != token_counts.size()) {
    throw InvalidValue("one token count per candidate is required");
  }
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < advantages.size(); ++i) {
    out.emplace_back(token_counts[i], advantages[i]);
  }
  return out;
}

}  // namespace litscout::evalkit
