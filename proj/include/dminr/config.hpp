#pragma once

#include "dminr/bm25.hpp"
#include "dminr/corpus.hpp"
#include "dminr/document.hpp"
#include "dminr/external_extractor.hpp"
#include "dminr/rank.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace dminr {

using WallClock = std::function<std::chrono::system_clock::time_point()>;

WallClock system_wall_clock();
std::string iso8601_utc(std::chrono::system_clock::time_point t);

// Minimal TOML reader: [section] / [section.sub] headers, `key = value` with
// quoted strings, integers, floats and booleans, and # comments.
using ConfigValue = std::variant<std::string, std::int64_t, double, bool>;
using ConfigTable = std::map<std::string, std::map<std::string, ConfigValue>>;

ConfigTable parse_config_table(std::string_view text, const std::string& origin = "<config>");

struct SourceSettings {
    enum class Mode { fixture, live };

    Mode mode = Mode::fixture;
    std::optional<std::filesystem::path> fixture_dir;
    std::string endpoint;    // live base URL
    std::string api_key_env; // name of the environment variable holding the key
    std::chrono::milliseconds timeout{5'000};
    std::size_t max_results = 10;
};

struct SourcesConfig {
    std::map<SourceKind, SourceSettings> sources;

    // All four sources in fixture mode reading from `dir`.
    static SourcesConfig from_fixture_dir(const std::filesystem::path& dir);
};

enum class ExpansionQuery { display, key, quoted };

struct PipelineConfig {
    Bm25Params bm25;
    std::size_t top_k = kDefaultTopEntities;
    DedupOptions dedup;
    unsigned workers = 1;
    EntityAggregation aggregation = EntityAggregation::sum_over_docs;
    std::optional<std::filesystem::path> gazetteer;
    std::optional<ExtractorEndpoint> extractor;
};

struct ServiceConfig {
    SourcesConfig sources;
    PipelineConfig pipeline;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path event_log = "events.jsonl";
    std::chrono::seconds session_ttl = std::chrono::hours(24);
    ExpansionQuery expansion_query = ExpansionQuery::display;
};

// Reads and validates a config file. Relative paths resolve against the
// file's directory. Throws Error(io) or Error(parse).
ServiceConfig load_config(const std::filesystem::path& path);
ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::string& origin = "<config>");

} // namespace dminr
