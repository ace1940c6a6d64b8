#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace dminr {

using json = nlohmann::ordered_json;

enum class SourceKind { articles, companies, officers, web, fixture };

std::string_view source_name(SourceKind source) noexcept;
std::optional<SourceKind> parse_source(std::string_view name) noexcept;

// A retrieved text item with its source provenance.
struct Document {
    std::string id;
    SourceKind source = SourceKind::fixture;
    std::string title;
    std::string body;
    std::string url;
    std::optional<std::string> published_at;
    std::optional<std::string> topic;

    friend bool operator==(const Document&, const Document&) = default;
};

// Accepts YYYY-MM-DD, optionally followed by a 'T' time part.
bool is_iso8601_date(std::string_view text) noexcept;

json document_to_json(const Document& doc);

// Throws Error(parse) with a description of the offending field.
Document document_from_json(const json& record);

} // namespace dminr
