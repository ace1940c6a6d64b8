#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dminr {

// A lowercased word with its location in the source text. Character offsets
// count Unicode scalar values; byte offsets index the UTF-8 source.
struct Token {
    std::string text;
    std::size_t char_start = 0;
    std::size_t char_end = 0;
    std::size_t position = 0;
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;

    friend bool operator==(const Token&, const Token&) = default;
};

// Maximal runs of alphanumeric scalar values. A single apostrophe or hyphen
// between two alphanumerics stays inside the run ("o'neill", "state-of-the-art").
// Each token is simple-case-folded; everything else is discarded.
std::vector<Token> tokenize(std::string_view text);

// Convenience: the token texts only.
std::vector<std::string> token_texts(std::string_view text);

} // namespace dminr
