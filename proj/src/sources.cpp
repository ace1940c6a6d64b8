#include "dminr/sources.hpp"

#include "dminr/corpus.hpp"
#include "dminr/error.hpp"
#include "dminr/tokenizer.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>

namespace dminr {

void SourceQuery::validate() const {
    const bool blank = std::all_of(text.begin(), text.end(),
                                   [](unsigned char c) { return std::isspace(c) != 0; });
    if (blank) throw Error(Errc::invalid_argument, "query text is empty");
    if (max_results < 1) throw Error(Errc::invalid_argument, "max_results must be at least 1");
    if (source == SourceKind::fixture) throw Error(Errc::invalid_argument, "not a searchable source");
    if (source == SourceKind::officers && !officer_parent) {
        throw Error(Errc::invalid_argument, "officer queries need a parent company id");
    }
}

json source_result_to_json(const SourceResult& result) {
    json items = json::array();
    for (const auto& d : result.items) items.push_back(document_to_json(d));
    json j;
    j["source"] = source_name(result.source);
    j["items"] = std::move(items);
    j["fetched_at"] = result.fetched_at;
    j["degraded"] = result.degraded;
    if (result.degraded) j["note"] = result.note;
    return j;
}

std::vector<Document> TabSet::all_items() const {
    std::vector<Document> out;
    for (auto s : kSearchSources) {
        auto it = tabs.find(s);
        if (it == tabs.end()) continue;
        out.insert(out.end(), it->second.items.begin(), it->second.items.end());
    }
    return out;
}

json tabset_to_json(const TabSet& tabs) {
    json j = json::object();
    for (auto s : kSearchSources) {
        auto it = tabs.tabs.find(s);
        if (it != tabs.tabs.end()) j[std::string(source_name(s))] = source_result_to_json(it->second);
    }
    return j;
}

// ---- fixtures --------------------------------------------------------------

const std::vector<FixtureRecord>& FixtureStore::records(SourceKind source) const {
    static const std::vector<FixtureRecord> none;
    auto it = records_.find(source);
    return it == records_.end() ? none : it->second;
}

std::vector<Document> FixtureStore::search(const SourceQuery& query) const {
    std::vector<Document> out;
    if (query.source == SourceKind::officers) {
        for (const auto& r : records(SourceKind::officers)) {
            if (out.size() >= query.max_results) break;
            if (r.company_id == query.officer_parent) out.push_back(r.doc);
        }
        return out;
    }
    const auto terms = token_texts(query.text);
    if (terms.empty()) return out;
    for (const auto& r : records(query.source)) {
        if (out.size() >= query.max_results) break;
        const bool all = std::all_of(terms.begin(), terms.end(),
                                     [&](const std::string& t) { return r.terms.contains(t); });
        if (all) out.push_back(r.doc);
    }
    return out;
}

std::map<SourceKind, std::size_t> FixtureStore::counts() const {
    std::map<SourceKind, std::size_t> out;
    for (auto s : kSearchSources) out[s] = records(s).size();
    return out;
}

FixtureStore load_fixtures(const std::filesystem::path& dir) {
    FixtureStore store;
    for (auto source : kSearchSources) {
        const auto file = dir / (std::string(source_name(source)) + ".jsonl");
        std::ifstream in(file);
        if (!in) throw Error(Errc::io, "missing fixture file '" + file.string() + "'");
        auto& records = store.records_[source];
        std::set<std::string> ids;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto where = file.string() + ":" + std::to_string(line_no) + ": ";
            FixtureRecord rec;
            try {
                const auto j = json::parse(line);
                rec.doc = document_from_json(j);
                if (source == SourceKind::officers) {
                    auto it = j.find("company_id");
                    if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
                        throw Error(Errc::parse, "officer record lacks 'company_id'");
                    }
                    rec.company_id = it->get<std::string>();
                }
            } catch (const json::exception& e) {
                throw Error(Errc::parse, where + "malformed record: " + e.what());
            } catch (const Error& e) {
                throw Error(Errc::parse, where + e.what());
            }
            if (rec.doc.source != source) {
                throw Error(Errc::parse, where + "record source '" + std::string(source_name(rec.doc.source)) +
                                             "' does not match the file");
            }
            if (!ids.insert(rec.doc.id).second) {
                throw Error(Errc::duplicate_id, where + "duplicate id '" + rec.doc.id + "'");
            }
            auto words = token_texts(rec.doc.title);
            auto body = token_texts(rec.doc.body);
            rec.terms.insert(words.begin(), words.end());
            rec.terms.insert(body.begin(), body.end());
            records.push_back(std::move(rec));
        }
    }
    spdlog::debug("fixtures {}: articles={} companies={} officers={} web={}", dir.string(),
                  store.records(SourceKind::articles).size(), store.records(SourceKind::companies).size(),
                  store.records(SourceKind::officers).size(), store.records(SourceKind::web).size());
    return store;
}

// ---- hub -------------------------------------------------------------------

SourceHub::SourceHub(SourcesConfig config, WallClock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
    for (const auto& [source, settings] : config_.sources) {
        const auto& dir = settings.fixture_dir;
        if (!dir || stores_.contains(*dir) || store_errors_.contains(*dir)) continue;
        // A broken fixture directory only degrades the tabs that use it.
        try {
            stores_.emplace(*dir, std::make_shared<const FixtureStore>(load_fixtures(*dir)));
        } catch (const Error& e) {
            spdlog::warn("fixtures unavailable: {}", e.what());
            store_errors_.emplace(*dir, e);
        }
    }
}

const FixtureStore* SourceHub::fixtures_for(SourceKind source) const {
    auto it = config_.sources.find(source);
    if (it == config_.sources.end() || !it->second.fixture_dir) return nullptr;
    if (auto err = store_errors_.find(*it->second.fixture_dir); err != store_errors_.end()) throw err->second;
    return stores_.at(*it->second.fixture_dir).get();
}

// Generic live adapter. GET <endpoint>?q=<text>&limit=<n>[&company_id=<id>]
// with "Authorization: Bearer <key>" when a key variable is configured. The
// body is a JSON array of corpus records (or {"items": [...]}):
//   id -> Document.id, title -> title, body -> body (registry records rendered
//   as text), url -> url, published_at -> published_at, topic -> topic.
// The source field is forced to the queried source.
std::vector<Document> SourceHub::live_search(const SourceQuery& query,
                                             const SourceSettings& settings) const {
    std::string key;
    if (!settings.api_key_env.empty()) {
        const char* value = std::getenv(settings.api_key_env.c_str());
        if (!value || !*value) {
            throw Error(Errc::not_found, "credential variable " + settings.api_key_env + " is not set");
        }
        key = value;
    }
    const auto scheme_end = settings.endpoint.find("://");
    const auto path_start = settings.endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string host = settings.endpoint.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : settings.endpoint.substr(path_start);

    httplib::Client client(host);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(settings.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(settings.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    httplib::Params params{{"q", query.text}, {"limit", std::to_string(query.max_results)}};
    if (query.officer_parent) params.emplace("company_id", *query.officer_parent);
    httplib::Headers headers;
    if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

    auto res = client.Get(path, params, headers);
    if (!res) throw Error(Errc::io, "live source unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw Error(Errc::io, "live source returned HTTP " + std::to_string(res->status));

    std::vector<Document> docs;
    try {
        auto body = json::parse(res->body);
        const json& items = body.is_object() ? body.at("items") : body;
        for (auto record : items) {
            record["source"] = source_name(query.source);
            docs.push_back(document_from_json(record));
            if (docs.size() >= query.max_results) break;
        }
    } catch (const json::exception& e) {
        throw Error(Errc::protocol, std::string("malformed live response: ") + e.what());
    }
    return docs;
}

SourceResult SourceHub::search_source(const SourceQuery& query) const {
    query.validate();
    SourceResult result;
    result.source = query.source;
    auto it = config_.sources.find(query.source);
    const FixtureStore* fixtures = nullptr;
    std::optional<Error> fixture_error;
    try {
        fixtures = fixtures_for(query.source);
    } catch (const Error& e) {
        fixture_error = e;
    }

    if (it != config_.sources.end() && it->second.mode == SourceSettings::Mode::live) {
        try {
            result.items = live_search(query, it->second);
            result.fetched_at = iso8601_utc(clock_());
            return result;
        } catch (const Error& e) {
            if (!fixtures) throw;
            spdlog::warn("{} live search failed, using fixtures: {}", source_name(query.source), e.what());
            result.degraded = true;
            result.note = e.what();
        }
    } else if (fixture_error) {
        throw *fixture_error;
    } else if (!fixtures) {
        throw Error(Errc::not_found,
                    "no credentials or fixtures configured for " + std::string(source_name(query.source)));
    }
    result.items = fixtures->search(query);
    result.fetched_at = iso8601_utc(clock_());
    return result;
}

TabSet SourceHub::search_all(const std::string& text, const std::vector<std::string>& officer_parents) const {
    auto settings_for = [&](SourceKind s) {
        auto it = config_.sources.find(s);
        return it == config_.sources.end() ? SourceSettings{} : it->second;
    };
    auto degraded = [&](SourceKind s, const std::string& why) {
        SourceResult r;
        r.source = s;
        r.degraded = true;
        r.note = why;
        r.fetched_at = iso8601_utc(clock_());
        return r;
    };

    auto run = [&](SourceKind s) -> SourceResult {
        try {
            const auto settings = settings_for(s);
            if (s != SourceKind::officers) {
                return search_source({text, s, settings.max_results, std::nullopt});
            }
            if (officer_parents.empty() && settings.mode == SourceSettings::Mode::fixture &&
                !fixtures_for(s)) {
                return degraded(s, "no credentials or fixtures configured for officers");
            }
            SourceResult merged;
            merged.source = s;
            merged.fetched_at = iso8601_utc(clock_());
            std::set<std::string> seen;
            for (const auto& parent : officer_parents) {
                auto part = search_source({text, s, settings.max_results, parent});
                merged.degraded = merged.degraded || part.degraded;
                if (part.degraded) merged.note = part.note;
                for (auto& d : part.items) {
                    if (merged.items.size() < settings.max_results && seen.insert(d.id).second) {
                        merged.items.push_back(std::move(d));
                    }
                }
            }
            return merged;
        } catch (const Error& e) {
            spdlog::warn("{} search failed: {}", source_name(s), e.what());
            return degraded(s, e.what());
        }
    };

    std::vector<std::future<SourceResult>> pending;
    for (auto s : kSearchSources) pending.push_back(std::async(std::launch::async, run, s));
    TabSet tabs;
    for (std::size_t i = 0; i < pending.size(); ++i) tabs.tabs[kSearchSources[i]] = pending[i].get();
    return tabs;
}

} // namespace dminr
