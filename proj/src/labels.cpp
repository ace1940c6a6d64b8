#include "dminr/labels.hpp"

namespace dminr {

std::string_view label_name(EntityLabel label) noexcept {
    switch (label) {
    case EntityLabel::PER: return "PER";
    case EntityLabel::ORG: return "ORG";
    case EntityLabel::LOC: return "LOC";
    case EntityLabel::MISC: return "MISC";
    }
    return "MISC";
}

std::optional<EntityLabel> parse_label(std::string_view name) noexcept {
    for (auto l : kAllLabels) {
        if (label_name(l) == name) return l;
    }
    return std::nullopt;
}

bool label_less(EntityLabel a, EntityLabel b) noexcept {
    return label_name(a) < label_name(b);
}

std::string to_string(const BioTag& tag) {
    switch (tag.kind) {
    case BioTag::Kind::O: return "O";
    case BioTag::Kind::B: return "B-" + std::string(label_name(tag.label));
    case BioTag::Kind::I: return "I-" + std::string(label_name(tag.label));
    }
    return "O";
}

std::optional<BioTag> parse_bio_tag(std::string_view text) noexcept {
    if (text == "O") return BioTag::outside();
    if (text.size() < 3 || text[1] != '-') return std::nullopt;
    auto label = parse_label(text.substr(2));
    if (!label) return std::nullopt;
    if (text[0] == 'B') return BioTag::begin(*label);
    if (text[0] == 'I') return BioTag::inside(*label);
    return std::nullopt;
}

} // namespace dminr
