#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace skillmap::text {

[[nodiscard]] constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// ASCII letters/digits, plus every byte of a multi-byte UTF-8 sequence so that
// non-ASCII words survive tokenization intact.
[[nodiscard]] constexpr bool is_word_byte(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

[[nodiscard]] std::string to_lower(std::string_view s);
[[nodiscard]] std::string_view trim(std::string_view s) noexcept;

// Maximal runs of non-whitespace.
[[nodiscard]] std::vector<std::string_view> split_whitespace(std::string_view s);

// Lowercased maximal runs of word bytes.
[[nodiscard]] std::vector<std::string> word_tokens(std::string_view s);

[[nodiscard]] std::vector<std::string> split(std::string_view s, char sep);
[[nodiscard]] std::string join(const std::vector<std::string>& parts, std::string_view sep);

[[nodiscard]] bool is_valid_utf8(std::string_view s) noexcept;
[[nodiscard]] std::u32string decode_utf8(std::string_view s);
void append_utf8(std::string& out, char32_t cp);

[[nodiscard]] bool starts_with_utf8_bom(std::string_view s) noexcept;
[[nodiscard]] std::string_view strip_utf8_bom(std::string_view s) noexcept;

// Case-insensitive (ASCII) substring test.
[[nodiscard]] bool contains_ci(std::string_view haystack, std::string_view needle);

// Levenshtein distance over code points.
[[nodiscard]] std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

}  // namespace skillmap::text
