#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dminr {

// CoNLL-2003 entity classes.
enum class EntityLabel { PER, ORG, LOC, MISC };

inline constexpr EntityLabel kAllLabels[] = {EntityLabel::PER, EntityLabel::ORG,
                                             EntityLabel::LOC, EntityLabel::MISC};

std::string_view label_name(EntityLabel label) noexcept;
std::optional<EntityLabel> parse_label(std::string_view name) noexcept;

// Orders labels by their name, so that orderings do not depend on enum layout.
bool label_less(EntityLabel a, EntityLabel b) noexcept;

struct BioTag {
    enum class Kind { O, B, I };

    Kind kind = Kind::O;
    EntityLabel label = EntityLabel::MISC; // ignored when kind == O

    static BioTag outside() { return {}; }
    static BioTag begin(EntityLabel l) { return {Kind::B, l}; }
    static BioTag inside(EntityLabel l) { return {Kind::I, l}; }

    bool is_outside() const { return kind == Kind::O; }

    friend bool operator==(const BioTag& a, const BioTag& b) {
        return a.kind == b.kind && (a.kind == Kind::O || a.label == b.label);
    }
};

std::string to_string(const BioTag& tag);
std::optional<BioTag> parse_bio_tag(std::string_view text) noexcept;

} // namespace dminr
