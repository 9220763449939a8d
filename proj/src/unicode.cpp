#include "crfner/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "crfner/error.hpp"

namespace crfner::unicode {

namespace {

template <typename Fn>
bool for_each_codepoint(std::string_view text, Fn&& fn) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    const int32_t start = i;
    UChar32 cp;
    U8_NEXT(bytes, i, len, cp);
    if (cp < 0) return false;
    fn(static_cast<char32_t>(cp), static_cast<std::size_t>(start));
  }
  return true;
}

}  // namespace

bool is_valid_utf8(std::string_view text) {
  return for_each_codepoint(text, [](char32_t, std::size_t) {});
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  if (!for_each_codepoint(text, [&](char32_t cp, std::size_t) { out.push_back(cp); }))
    throw UsageError("invalid UTF-8 sequence");
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(cp), error);
    if (error) throw UsageError("code point out of range");
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

std::vector<std::size_t> boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  if (!for_each_codepoint(text, [&](char32_t, std::size_t at) { out.push_back(at); }))
    throw UsageError("invalid UTF-8 sequence");
  out.push_back(text.size());
  return out;
}

std::size_t length(std::string_view text) { return boundaries(text).size() - 1; }

bool is_decimal_digit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

bool is_uppercase_letter(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_UPPERCASE_LETTER;
}

std::string fold_case(std::string_view text) {
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.foldCase();
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  auto s = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = norm->normalize(s, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace crfner::unicode
