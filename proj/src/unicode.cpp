#include "cnnlstm/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "cnnlstm/error.hpp"

namespace cnnlstm::unicode {
namespace {

// Calls fn(code_point, begin_offset, end_offset) for each scalar value.
template <typename Fn>
void for_each_scalar(std::string_view s, Fn&& fn) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) throw ParseError("invalid UTF-8 at byte " + std::to_string(start));
    fn(static_cast<char32_t>(c), static_cast<std::size_t>(start), static_cast<std::size_t>(i));
  }
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(bytes, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

std::string nfc(std::string_view s) {
  if (!is_valid_utf8(s)) throw ParseError("invalid UTF-8");
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  const auto input = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<std::int32_t>(s.size())));
  if (normalizer->isNormalized(input, status) && U_SUCCESS(status)) return std::string(s);
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = normalizer->normalize(input, status);
  if (U_FAILURE(status)) throw Error(std::string("NFC normalization failed: ") + u_errorName(status));
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

std::vector<std::string> scalars(std::string_view s) {
  std::vector<std::string> out;
  for_each_scalar(s, [&](char32_t, std::size_t b, std::size_t e) {
    out.emplace_back(s.substr(b, e - b));
  });
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for_each_scalar(s, [&](char32_t, std::size_t, std::size_t) { ++n; });
  return n;
}

std::string trim(std::string_view s) {
  std::size_t first = s.size();
  std::size_t last = 0;
  for_each_scalar(s, [&](char32_t c, std::size_t b, std::size_t e) {
    if (is_whitespace(c)) return;
    if (first == s.size()) first = b;
    last = e;
  });
  if (first == s.size()) return {};
  return std::string(s.substr(first, last - first));
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> words;
  std::size_t word_start = 0;
  bool in_word = false;
  for_each_scalar(s, [&](char32_t c, std::size_t b, std::size_t) {
    if (is_whitespace(c)) {
      if (in_word) words.emplace_back(s.substr(word_start, b - word_start));
      in_word = false;
    } else if (!in_word) {
      word_start = b;
      in_word = true;
    }
  });
  if (in_word) words.emplace_back(s.substr(word_start));
  return words;
}

}  // namespace cnnlstm::unicode
