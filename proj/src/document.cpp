#include "dminr/document.hpp"

#include "dminr/error.hpp"
#include "dminr/unicode.hpp"

#include <cctype>

namespace dminr {

std::string_view source_name(SourceKind source) noexcept {
    switch (source) {
    case SourceKind::articles: return "articles";
    case SourceKind::companies: return "companies";
    case SourceKind::officers: return "officers";
    case SourceKind::web: return "web";
    case SourceKind::fixture: return "fixture";
    }
    return "fixture";
}

std::optional<SourceKind> parse_source(std::string_view name) noexcept {
    for (auto s : {SourceKind::articles, SourceKind::companies, SourceKind::officers,
                   SourceKind::web, SourceKind::fixture}) {
        if (source_name(s) == name) return s;
    }
    return std::nullopt;
}

bool is_iso8601_date(std::string_view text) noexcept {
    if (text.size() < 10) return false;
    auto digits = [&](std::size_t from, std::size_t count) {
        for (std::size_t i = from; i < from + count; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
        }
        return true;
    };
    if (!digits(0, 4) || text[4] != '-' || !digits(5, 2) || text[7] != '-' || !digits(8, 2)) {
        return false;
    }
    const int month = (text[5] - '0') * 10 + (text[6] - '0');
    const int day = (text[8] - '0') * 10 + (text[9] - '0');
    if (month < 1 || month > 12 || day < 1 || day > 31) return false;
    return text.size() == 10 || text[10] == 'T';
}

json document_to_json(const Document& doc) {
    json j;
    j["id"] = doc.id;
    j["source"] = source_name(doc.source);
    j["title"] = doc.title;
    j["body"] = doc.body;
    j["url"] = doc.url;
    j["published_at"] = doc.published_at ? json(*doc.published_at) : json(nullptr);
    j["topic"] = doc.topic ? json(*doc.topic) : json(nullptr);
    return j;
}

namespace {

std::string required_string(const json& record, const char* key) {
    auto it = record.find(key);
    if (it == record.end() || !it->is_string()) {
        throw Error(Errc::parse, std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::optional<std::string> nullable_string(const json& record, const char* key) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw Error(Errc::parse, std::string("field '") + key + "' must be a string or null");
    }
    return it->get<std::string>();
}

} // namespace

Document document_from_json(const json& record) {
    if (!record.is_object()) throw Error(Errc::parse, "record is not a JSON object");
    Document doc;
    doc.id = required_string(record, "id");
    if (doc.id.empty()) throw Error(Errc::parse, "field 'id' must be non-empty");
    const auto source = required_string(record, "source");
    auto kind = parse_source(source);
    if (!kind) throw Error(Errc::parse, "unknown source '" + source + "'");
    doc.source = *kind;
    doc.title = required_string(record, "title");
    doc.body = required_string(record, "body");
    doc.url = nullable_string(record, "url").value_or("");
    doc.published_at = nullable_string(record, "published_at");
    if (doc.published_at && !is_iso8601_date(*doc.published_at)) {
        throw Error(Errc::parse, "field 'published_at' is not an ISO-8601 date");
    }
    doc.topic = nullable_string(record, "topic");
    if (!unicode::is_valid_utf8(doc.body) || !unicode::is_valid_utf8(doc.title)) {
        throw Error(Errc::parse, "text is not valid UTF-8");
    }
    return doc;
}

} // namespace dminr
