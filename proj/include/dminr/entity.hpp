#pragma once

#include "dminr/document.hpp"
#include "dminr/labels.hpp"
#include "dminr/tokenizer.hpp"

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dminr {

// Canonical identity of an entity: the case-folded surface plus its label.
struct EntityKey {
    std::string surface;
    EntityLabel label = EntityLabel::MISC;

    // "LABEL:surface", e.g. "ORG:acme corp".
    std::string id() const;
    static std::optional<EntityKey> parse(std::string_view id);

    friend bool operator==(const EntityKey&, const EntityKey&) = default;
    friend std::strong_ordering operator<=>(const EntityKey& a, const EntityKey& b) {
        if (auto c = a.surface <=> b.surface; c != 0) return c;
        return label_name(a.label) <=> label_name(b.label);
    }
};

struct EntityMention {
    std::string surface; // original case, sliced from the body
    EntityLabel label = EntityLabel::MISC;
    std::string doc_id;
    std::size_t token_start = 0; // ordinals, end exclusive
    std::size_t token_end = 0;
    std::size_t char_start = 0;  // code points, end exclusive
    std::size_t char_end = 0;

    EntityKey key() const;

    friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

struct Entity {
    EntityKey key;
    std::string display;
    std::vector<EntityMention> mentions;
    std::set<std::string> doc_ids;
    double score = 0.0;

    EntityLabel label() const { return key.label; }

    friend bool operator==(const Entity&, const Entity&) = default;
};

json entity_to_json(const Entity& entity);

// ---- gazetteer -------------------------------------------------------------

// Lower-case token sequences mapped to labels.
class Gazetteer {
public:
    void add(std::vector<std::string> phrase, EntityLabel label);

    std::optional<EntityLabel> find(const std::vector<std::string>& phrase) const;
    std::size_t max_phrase_length() const noexcept { return max_len_; }
    std::size_t size() const noexcept { return phrases_.size(); }
    bool empty() const noexcept { return phrases_.empty(); }

private:
    std::map<std::vector<std::string>, EntityLabel> phrases_;
    std::size_t max_len_ = 0;
};

// TSV `phrase<TAB>label`; phrase tokens are space-separated and lower case.
// Blank lines and lines starting with '#' are ignored.
Gazetteer parse_gazetteer(std::istream& in, const std::string& origin = "<stream>");
Gazetteer load_gazetteer(const std::filesystem::path& path);

// ---- BIO tagging -----------------------------------------------------------

bool is_bio_valid(std::span<const BioTag> tags) noexcept;

// Turns every I-L that does not continue a B-L/I-L run into B-L.
std::vector<BioTag> repair_bio(std::span<const BioTag> tags);

// Baseline labeller. Pass one assigns the longest gazetteer match at each
// position; pass two tags runs of capitalised tokens as MISC. A run breaks on
// any non-space character between tokens. A lone capitalised token at the
// start of a sentence is left as O.
// Throws Error(invalid_argument) when `tokens` is not tokenize(doc.body).
std::vector<BioTag> label_tokens(const Document& doc, std::span<const Token> tokens,
                                 const Gazetteer& gazetteer);

// True when the token is the first of the document or the text before it
// holds one of . ! ? followed by white space.
bool is_sentence_initial(std::string_view text, std::span<const Token> tokens, std::size_t i);

// One mention per maximal B/I run (after repair). Throws Error(length_mismatch).
std::vector<EntityMention> decode_mentions(std::span<const BioTag> tags,
                                           std::span<const Token> tokens, const Document& doc);

// Inverse of decode_mentions over token spans.
std::vector<BioTag> encode_mentions(std::span<const EntityMention> mentions, std::size_t token_count);

// Groups mentions by key. Display is the most frequent original surface,
// earliest on ties. Sorted by key.
std::vector<Entity> canonicalize(std::span<const EntityMention> mentions);

} // namespace dminr
