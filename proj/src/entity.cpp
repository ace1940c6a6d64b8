#include "dminr/entity.hpp"

#include "dminr/error.hpp"
#include "dminr/unicode.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dminr {

std::string EntityKey::id() const {
    return std::string(label_name(label)) + ":" + surface;
}

std::optional<EntityKey> EntityKey::parse(std::string_view id) {
    const auto colon = id.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    auto label = parse_label(id.substr(0, colon));
    if (!label || colon + 1 >= id.size()) return std::nullopt;
    return EntityKey{std::string(id.substr(colon + 1)), *label};
}

EntityKey EntityMention::key() const {
    return {unicode::case_fold(surface), label};
}

json entity_to_json(const Entity& entity) {
    json j;
    j["id"] = entity.key.id();
    j["display"] = entity.display;
    j["label"] = label_name(entity.key.label);
    j["score"] = entity.score;
    j["mentions"] = entity.mentions.size();
    j["docs"] = entity.doc_ids;
    return j;
}

// ---- gazetteer -------------------------------------------------------------

void Gazetteer::add(std::vector<std::string> phrase, EntityLabel label) {
    if (phrase.empty()) throw Error(Errc::invalid_argument, "empty gazetteer phrase");
    max_len_ = std::max(max_len_, phrase.size());
    phrases_[std::move(phrase)] = label;
}

std::optional<EntityLabel> Gazetteer::find(const std::vector<std::string>& phrase) const {
    auto it = phrases_.find(phrase);
    if (it == phrases_.end()) return std::nullopt;
    return it->second;
}

Gazetteer parse_gazetteer(std::istream& in, const std::string& origin) {
    Gazetteer gaz;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto where = origin + ":" + std::to_string(line_no) + ": ";
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw Error(Errc::parse, where + "expected phrase<TAB>label");
        auto label = parse_label(line.substr(tab + 1));
        if (!label) throw Error(Errc::parse, where + "unknown label '" + line.substr(tab + 1) + "'");
        std::vector<std::string> phrase;
        std::istringstream words(line.substr(0, tab));
        for (std::string w; words >> w;) phrase.push_back(std::move(w));
        if (phrase.empty()) throw Error(Errc::parse, where + "empty phrase");
        gaz.add(std::move(phrase), *label);
    }
    return gaz;
}

Gazetteer load_gazetteer(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open gazetteer '" + path.string() + "'");
    return parse_gazetteer(in, path.string());
}

// ---- BIO -------------------------------------------------------------------

bool is_bio_valid(std::span<const BioTag> tags) noexcept {
    for (std::size_t i = 0; i < tags.size(); ++i) {
        if (tags[i].kind != BioTag::Kind::I) continue;
        if (i == 0 || tags[i - 1].is_outside() || tags[i - 1].label != tags[i].label) return false;
    }
    return true;
}

std::vector<BioTag> repair_bio(std::span<const BioTag> tags) {
    std::vector<BioTag> out(tags.begin(), tags.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].kind != BioTag::Kind::I) continue;
        if (i == 0 || out[i - 1].is_outside() || out[i - 1].label != out[i].label) {
            out[i].kind = BioTag::Kind::B;
        }
    }
    return out;
}

namespace {

bool is_capitalized(std::string_view text, const Token& tok) {
    std::size_t pos = tok.byte_start;
    return unicode::is_upper_or_title(unicode::next_code_point(text, pos));
}

bool gap_is_space(std::string_view text, const Token& left, const Token& right) {
    std::size_t pos = left.byte_end;
    while (pos < right.byte_start) {
        if (!unicode::is_white_space(unicode::next_code_point(text, pos))) return false;
    }
    return true;
}

} // namespace

bool is_sentence_initial(std::string_view text, std::span<const Token> tokens, std::size_t i) {
    if (i == 0) return true;
    const auto gap = text.substr(tokens[i - 1].byte_end, tokens[i].byte_start - tokens[i - 1].byte_end);
    std::size_t pos = 0;
    bool after_terminator = false;
    while (pos < gap.size()) {
        const char32_t cp = unicode::next_code_point(gap, pos);
        if (after_terminator && unicode::is_white_space(cp)) return true;
        after_terminator = cp == U'.' || cp == U'!' || cp == U'?';
    }
    return false;
}

std::vector<BioTag> label_tokens(const Document& doc, std::span<const Token> tokens,
                                 const Gazetteer& gazetteer) {
    const auto expected = tokenize(doc.body);
    if (!std::equal(expected.begin(), expected.end(), tokens.begin(), tokens.end())) {
        throw Error(Errc::invalid_argument, "tokens do not belong to document '" + doc.id + "'");
    }
    const std::size_t n = tokens.size();
    std::vector<BioTag> tags(n);
    std::vector<bool> tagged(n, false);

    // Pass 1: longest gazetteer match, left to right.
    for (std::size_t i = 0; i < n;) {
        std::size_t best_len = 0;
        EntityLabel best_label = EntityLabel::MISC;
        std::vector<std::string> phrase;
        const std::size_t limit = std::min(gazetteer.max_phrase_length(), n - i);
        for (std::size_t len = 1; len <= limit; ++len) {
            phrase.push_back(tokens[i + len - 1].text);
            if (auto label = gazetteer.find(phrase)) {
                best_len = len;
                best_label = *label;
            }
        }
        if (best_len == 0) {
            ++i;
            continue;
        }
        for (std::size_t k = 0; k < best_len; ++k) {
            tags[i + k] = k == 0 ? BioTag::begin(best_label) : BioTag::inside(best_label);
            tagged[i + k] = true;
        }
        i += best_len;
    }

    // Pass 2: runs of capitalised, untagged tokens.
    for (std::size_t i = 0; i < n;) {
        if (tagged[i] || !is_capitalized(doc.body, tokens[i])) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < n && !tagged[j] && is_capitalized(doc.body, tokens[j]) &&
               gap_is_space(doc.body, tokens[j - 1], tokens[j])) {
            ++j;
        }
        if (!(j - i == 1 && is_sentence_initial(doc.body, tokens, i))) {
            for (std::size_t k = i; k < j; ++k) {
                tags[k] = k == i ? BioTag::begin(EntityLabel::MISC) : BioTag::inside(EntityLabel::MISC);
            }
        }
        i = j;
    }
    return tags;
}

std::vector<EntityMention> decode_mentions(std::span<const BioTag> tags,
                                           std::span<const Token> tokens, const Document& doc) {
    if (tags.size() != tokens.size()) {
        throw Error(Errc::length_mismatch, "tag count " + std::to_string(tags.size()) +
                                               " does not match token count " +
                                               std::to_string(tokens.size()));
    }
    const auto fixed = repair_bio(tags);
    std::vector<EntityMention> mentions;
    for (std::size_t i = 0; i < fixed.size();) {
        if (fixed[i].kind != BioTag::Kind::B) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < fixed.size() && fixed[j].kind == BioTag::Kind::I) ++j;
        const auto& first = tokens[i];
        const auto& last = tokens[j - 1];
        if (last.byte_end > doc.body.size()) {
            throw Error(Errc::invalid_argument, "token offsets exceed document body");
        }
        EntityMention m;
        m.surface = doc.body.substr(first.byte_start, last.byte_end - first.byte_start);
        m.label = fixed[i].label;
        m.doc_id = doc.id;
        m.token_start = i;
        m.token_end = j;
        m.char_start = first.char_start;
        m.char_end = last.char_end;
        mentions.push_back(std::move(m));
        i = j;
    }
    return mentions;
}

std::vector<BioTag> encode_mentions(std::span<const EntityMention> mentions, std::size_t token_count) {
    std::vector<BioTag> tags(token_count);
    for (const auto& m : mentions) {
        if (m.token_start >= m.token_end || m.token_end > token_count) {
            throw Error(Errc::invalid_argument, "mention span outside token range");
        }
        tags[m.token_start] = BioTag::begin(m.label);
        for (std::size_t k = m.token_start + 1; k < m.token_end; ++k) tags[k] = BioTag::inside(m.label);
    }
    return tags;
}

std::vector<Entity> canonicalize(std::span<const EntityMention> mentions) {
    struct Group {
        Entity entity;
        // surface -> (count, first index)
        std::map<std::string, std::pair<std::size_t, std::size_t>> surfaces;
    };
    std::map<EntityKey, Group> groups;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        const auto& m = mentions[i];
        auto& g = groups[m.key()];
        g.entity.key = m.key();
        g.entity.mentions.push_back(m);
        g.entity.doc_ids.insert(m.doc_id);
        auto [it, inserted] = g.surfaces.try_emplace(m.surface, 0, i);
        ++it->second.first;
    }
    std::vector<Entity> out;
    out.reserve(groups.size());
    for (auto& [key, g] : groups) {
        const std::string* best = nullptr;
        std::pair<std::size_t, std::size_t> best_stat{0, 0};
        for (const auto& [surface, stat] : g.surfaces) {
            if (!best || stat.first > best_stat.first ||
                (stat.first == best_stat.first && stat.second < best_stat.second)) {
                best = &surface;
                best_stat = stat;
            }
        }
        g.entity.display = *best;
        out.push_back(std::move(g.entity));
    }
    return out;
}

} // namespace dminr
