#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Code-point level helpers over UTF-8 strings. All classification goes
// through ICU so that Indic digits and non-Latin case are handled.
namespace crfner::unicode {

bool is_valid_utf8(std::string_view text);

/// Decodes UTF-8; throws UsageError on malformed input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);

/// Byte offsets of every code-point boundary, including 0 and text.size().
std::vector<std::size_t> boundaries(std::string_view text);

std::size_t length(std::string_view text);

bool is_decimal_digit(char32_t cp);
bool is_uppercase_letter(char32_t cp);

std::string fold_case(std::string_view text);
std::string nfc(std::string_view text);

}  // namespace crfner::unicode
