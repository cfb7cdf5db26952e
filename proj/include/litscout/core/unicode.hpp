#pragma once

// Thin ICU wrappers shared by tokenization, paper-key normalization and
// evidence verification. All functions take and return UTF-8; malformed
// sequences decode to U+FFFD, which every caller treats as a separator.

#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "litscout/core/error.hpp"

namespace litscout::unicode {

inline icu::UnicodeString nfkc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) {
    throw ConfigurationError("ICU NFKC normalizer unavailable");
  }
  auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = norm->normalize(src, status);
  if (U_FAILURE(status)) return src;
  return out;
}

/// Calls fn(UChar32) for every code point of `s`.
template <typename Fn>
void for_each_code_point(const icu::UnicodeString& s, Fn&& fn) {
  for (int32_t i = 0; i < s.length();) {
    UChar32 c = s.char32At(i);
    fn(c);
    i += U16_LENGTH(c);
  }
}

inline void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

inline bool is_ideograph(UChar32 c) {
  return u_hasBinaryProperty(c, UCHAR_IDEOGRAPHIC);
}

inline bool is_mark(UChar32 c) {
  const auto mask = U_GC_M_MASK;
  return (U_GET_GC_MASK(c) & mask) != 0;
}

/// Letters, digits and combining marks form words; everything else splits.
inline bool is_word_char(UChar32 c) {
  return u_isalnum(c) || is_mark(c);
}

inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }

/// NFKC, lowercase, keep only alphanumerics. "The  Cat-SAT!" -> "thecatsat".
inline std::string alnum_key(std::string_view text) {
  std::string out;
  for_each_code_point(nfkc(text), [&](UChar32 c) {
    if (u_isalnum(c)) append_utf8(out, u_tolower(c));
  });
  return out;
}

/// NFKC, lowercase, whitespace runs collapsed to one ASCII space, trimmed.
inline std::string fold_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for_each_code_point(nfkc(text), [&](UChar32 c) {
    if (is_space(c)) {
      pending_space = !out.empty();
      return;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    append_utf8(out, u_tolower(c));
  });
  return out;
}

inline std::string trim_ascii(std::string_view s) {
  const auto is_ws = [](char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' ||
           ch == '\v';
  };
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ws(s[b])) ++b;
  while (e > b && is_ws(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

/// True when `text` has at least one non-whitespace code point.
inline bool has_visible_text(std::string_view text) {
  bool found = false;
  for_each_code_point(
      icu::UnicodeString::fromUTF8(
          icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))),
      [&](UChar32 c) { found = found || !is_space(c); });
  return found;
}

}  // namespace litscout::unicode
