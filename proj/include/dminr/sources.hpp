#pragma once

#include "dminr/config.hpp"
#include "dminr/document.hpp"
#include "dminr/error.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dminr {

inline constexpr SourceKind kSearchSources[] = {SourceKind::articles, SourceKind::companies,
                                                SourceKind::officers, SourceKind::web};

struct SourceQuery {
    std::string text;
    SourceKind source = SourceKind::articles;
    std::size_t max_results = 10;
    std::optional<std::string> officer_parent; // company id, required for officers

    // Throws Error(invalid_argument).
    void validate() const;
};

struct SourceResult {
    SourceKind source = SourceKind::articles;
    std::vector<Document> items;
    std::string fetched_at;
    bool degraded = false;
    std::string note; // why the result is degraded, if it is
};

json source_result_to_json(const SourceResult& result);

// Results kept apart per source, one entry for each of the four sources.
struct TabSet {
    std::map<SourceKind, SourceResult> tabs;

    // Items of all tabs, in source order then result order.
    std::vector<Document> all_items() const;
};

json tabset_to_json(const TabSet& tabs);

struct FixtureRecord {
    Document doc;
    std::set<std::string> terms;          // title + body tokens
    std::optional<std::string> company_id; // officers only
};

// In-memory fixture back-end, one list per source in file order.
class FixtureStore {
public:
    const std::vector<FixtureRecord>& records(SourceKind source) const;

    // Conjunctive, case-insensitive token match over title and body. Officers
    // are listed by company: the officer_parent must equal their company_id.
    std::vector<Document> search(const SourceQuery& query) const;

    std::map<SourceKind, std::size_t> counts() const;

private:
    friend FixtureStore load_fixtures(const std::filesystem::path& dir);
    std::map<SourceKind, std::vector<FixtureRecord>> records_;
};

// Reads articles.jsonl, companies.jsonl, officers.jsonl and web.jsonl.
// Every record's source must match its file; officers need "company_id".
// Throws Error(io) naming a missing file, Error(parse) with the line number.
FixtureStore load_fixtures(const std::filesystem::path& dir);

// Dispatches queries to the configured back-ends.
class SourceHub {
public:
    explicit SourceHub(SourcesConfig config, WallClock clock = system_wall_clock());

    // Throws Error(invalid_argument) for a bad query, Error(not_found) when the
    // source has neither live credentials nor fixtures.
    SourceResult search_source(const SourceQuery& query) const;

    // Queries the four sources concurrently; a failing source yields an empty
    // degraded tab. Officers are listed for each company id in
    // `officer_parents` (none given: the officers tab is empty).
    TabSet search_all(const std::string& text, const std::vector<std::string>& officer_parents = {}) const;

    const SourcesConfig& config() const noexcept { return config_; }

private:
    std::vector<Document> live_search(const SourceQuery& query, const SourceSettings& settings) const;
    // Throws the load error recorded for the source's fixture directory.
    const FixtureStore* fixtures_for(SourceKind source) const;

    SourcesConfig config_;
    WallClock clock_;
    std::map<std::filesystem::path, std::shared_ptr<const FixtureStore>> stores_;
    std::map<std::filesystem::path, Error> store_errors_;
};

} // namespace dminr
