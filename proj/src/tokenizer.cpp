#include "dminr/tokenizer.hpp"

#include "dminr/unicode.hpp"

namespace dminr {

namespace {

bool is_connector(char32_t cp) {
    return cp == U'\'' || cp == U'’' || cp == U'-' || cp == U'‐' || cp == U'‑';
}

} // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t pos = 0;
    std::size_t cp_index = 0;
    bool in_run = false;
    Token current;

    auto finish = [&](std::size_t byte_end, std::size_t char_end) {
        current.byte_end = byte_end;
        current.char_end = char_end;
        current.text = unicode::case_fold(text.substr(current.byte_start, byte_end - current.byte_start));
        current.position = tokens.size();
        tokens.push_back(std::move(current));
        current = Token{};
        in_run = false;
    };

    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = unicode::next_code_point(text, pos);
        if (unicode::is_alnum(cp) || (in_run && unicode::is_combining_mark(cp))) {
            if (!in_run) {
                in_run = true;
                current.byte_start = start;
                current.char_start = cp_index;
            }
        } else if (in_run && is_connector(cp) && pos < text.size()) {
            std::size_t peek = pos;
            const char32_t next = unicode::next_code_point(text, peek);
            if (!unicode::is_alnum(next)) finish(start, cp_index);
        } else if (in_run) {
            finish(start, cp_index);
        }
        ++cp_index;
    }
    if (in_run) finish(text.size(), cp_index);
    return tokens;
}

std::vector<std::string> token_texts(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text)) out.push_back(std::move(t.text));
    return out;
}

} // namespace dminr
