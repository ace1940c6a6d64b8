#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Thin UTF-8 helpers over ICU character properties.
namespace dminr::unicode {

// True when `text` is well-formed UTF-8 (no surrogates, no overlongs).
bool is_valid_utf8(std::string_view text) noexcept;

// Decodes the scalar value starting at byte `pos` and advances `pos`.
// Precondition: `text` is valid UTF-8 and pos < text.size().
char32_t next_code_point(std::string_view text, std::size_t& pos) noexcept;

void append_utf8(std::string& out, char32_t cp);

// Number of scalar values in valid UTF-8 text.
std::size_t code_point_length(std::string_view text) noexcept;

// Byte offset of the `cp_offset`-th scalar value (text.size() when at end).
// Throws Error(invalid_argument) when the offset is past the end.
std::size_t byte_offset(std::string_view text, std::size_t cp_offset);

std::string substr_code_points(std::string_view text, std::size_t start, std::size_t end);

bool is_alnum(char32_t cp) noexcept;
bool is_combining_mark(char32_t cp) noexcept;
bool is_upper_or_title(char32_t cp) noexcept;
bool is_white_space(char32_t cp) noexcept;

char32_t simple_fold(char32_t cp) noexcept;

// Simple case folding applied per scalar value.
std::string case_fold(std::string_view text);

} // namespace dminr::unicode
