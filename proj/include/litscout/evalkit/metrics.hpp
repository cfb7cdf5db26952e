#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "litscout/core/error.hpp"
#include "litscout/evalkit/tokenize.hpp"

namespace litscout::evalkit {

using Tokens = std::vector<std::string>;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

namespace detail {

inline Prf prf(double overlap, std::size_t cand_len, std::size_t ref_len) {
  if (cand_len == 0 || ref_len == 0) return {};
  Prf out;
  out.precision = overlap / static_cast<double>(cand_len);
  out.recall = overlap / static_cast<double>(ref_len);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

inline std::map<std::vector<std::string_view>, std::size_t> ngram_counts(const Tokens& t,
                                                                         std::size_t n) {
  std::map<std::vector<std::string_view>, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) {
    ++out[std::vector<std::string_view>(t.begin() + static_cast<std::ptrdiff_t>(i),
                                        t.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

inline std::size_t ngram_total(const Tokens& t, std::size_t n) {
  return t.size() >= n ? t.size() - n + 1 : 0;
}

/// Sum over candidate n-grams of min(count in candidate, max count in any reference).
inline std::size_t clipped_overlap(const Tokens& cand, const std::vector<const Tokens*>& refs,
                                   std::size_t n) {
  std::map<std::vector<std::string_view>, std::size_t> max_ref;
  for (const auto* r : refs) {
    for (const auto& [g, c] : ngram_counts(*r, n)) max_ref[g] = std::max(max_ref[g], c);
  }
  std::size_t overlap = 0;
  for (const auto& [g, c] : ngram_counts(cand, n)) {
    auto it = max_ref.find(g);
    if (it != max_ref.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace detail

/// Clipped n-gram overlap. Either side without n-grams scores all zeros.
inline Prf rouge_n(const Tokens& candidate, const Tokens& reference, std::size_t n) {
  if (n < 1) throw InvalidValue("rouge_n requires n >= 1");
  const auto overlap = detail::clipped_overlap(candidate, {&reference}, n);
  return detail::prf(static_cast<double>(overlap), detail::ngram_total(candidate, n),
                     detail::ngram_total(reference, n));
}

inline Prf rouge_n(std::string_view candidate, std::string_view reference, std::size_t n) {
  return rouge_n(tokenize(candidate), tokenize(reference), n);
}

inline Prf rouge_l(const Tokens& candidate, const Tokens& reference) {
  return detail::prf(static_cast<double>(detail::lcs_length(candidate, reference)),
                     candidate.size(), reference.size());
}

inline Prf rouge_l(std::string_view candidate, std::string_view reference) {
  return rouge_l(tokenize(candidate), tokenize(reference));
}

/// Corpus-free sentence BLEU. Uniform weights over n = 1..max_n; a zero
/// clipped count at n >= 2 is smoothed to (0+1)/(total+1). Brevity penalty
/// uses the reference length closest to the candidate (shorter on ties).
inline double bleu(const Tokens& candidate, const std::vector<Tokens>& references,
                   std::size_t max_n = 4) {
  if (references.empty()) throw InvalidValue("bleu requires at least one reference");
  if (max_n < 1) throw InvalidValue("bleu requires max_n >= 1");
  if (candidate.empty()) return 0.0;
  std::vector<const Tokens*> refs;
  for (const auto& r : references) refs.push_back(&r);

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    double num = static_cast<double>(detail::clipped_overlap(candidate, refs, n));
    double den = static_cast<double>(detail::ngram_total(candidate, n));
    if (num == 0.0) {
      if (n == 1) return 0.0;
      num += 1.0;
      den += 1.0;
    }
    log_sum += std::log(num / den);
  }
  const double c = static_cast<double>(candidate.size());
  double r = static_cast<double>(references.front().size());
  for (const auto& ref : references) {
    const double len = static_cast<double>(ref.size());
    if (std::abs(len - c) < std::abs(r - c) || (std::abs(len - c) == std::abs(r - c) && len < r)) {
      r = len;
    }
  }
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

inline double bleu(std::string_view candidate, const std::vector<std::string>& references,
                   std::size_t max_n = 4) {
  std::vector<Tokens> refs;
  for (const auto& r : references) refs.push_back(tokenize(r));
  return bleu(tokenize(candidate), refs, max_n);
}

/// 100 * |candidate| / |reference| in tokens.
inline double length_ratio(const Tokens& candidate, const Tokens& reference) {
  if (reference.empty()) throw UndefinedRatioError("reference text has no tokens");
  return 100.0 * static_cast<double>(candidate.size()) / static_cast<double>(reference.size());
}

inline double length_ratio(std::string_view candidate, std::string_view reference) {
  return length_ratio(tokenize(candidate), tokenize(reference));
}

}  // namespace litscout::evalkit
