#include "dminr/config.hpp"

#include "dminr/error.hpp"

#include <charconv>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

namespace dminr {

WallClock system_wall_clock() {
    return [] { return std::chrono::system_clock::now(); };
}

std::string iso8601_utc(std::chrono::system_clock::time_point t) {
    const std::time_t secs = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Strips a trailing comment outside of quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '\\' && quoted) {
            ++i;
        } else if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

ConfigValue parse_value(const std::string& raw, const std::string& where) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                const char c = raw[++i];
                out.push_back(c == 'n' ? '\n' : c == 't' ? '\t' : c);
            } else {
                out.push_back(raw[i]);
            }
        }
        return out;
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), i);
    if (ec == std::errc() && p == raw.data() + raw.size()) return i;
    double d = 0.0;
    auto [p2, ec2] = std::from_chars(raw.data(), raw.data() + raw.size(), d);
    if (ec2 == std::errc() && p2 == raw.data() + raw.size()) return d;
    throw Error(Errc::parse, where + "cannot parse value '" + raw + "'");
}

class Reader {
public:
    Reader(const ConfigTable& table, std::filesystem::path base, std::string origin)
        : table_(table), base_(std::move(base)), origin_(std::move(origin)) {}

    bool has(const std::string& section) const { return table_.contains(section); }

    std::optional<std::string> str(const std::string& section, const std::string& key) const {
        auto v = find(section, key);
        if (!v) return std::nullopt;
        if (auto s = std::get_if<std::string>(v)) return *s;
        throw bad(section, key, "a string");
    }
    std::optional<std::filesystem::path> path(const std::string& section, const std::string& key) const {
        auto s = str(section, key);
        if (!s) return std::nullopt;
        std::filesystem::path p(*s);
        return p.is_absolute() ? p : base_ / p;
    }
    std::optional<std::int64_t> integer(const std::string& section, const std::string& key) const {
        auto v = find(section, key);
        if (!v) return std::nullopt;
        if (auto i = std::get_if<std::int64_t>(v)) return *i;
        throw bad(section, key, "an integer");
    }
    std::optional<double> real(const std::string& section, const std::string& key) const {
        auto v = find(section, key);
        if (!v) return std::nullopt;
        if (auto d = std::get_if<double>(v)) return *d;
        if (auto i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
        throw bad(section, key, "a number");
    }
    std::optional<bool> boolean(const std::string& section, const std::string& key) const {
        auto v = find(section, key);
        if (!v) return std::nullopt;
        if (auto b = std::get_if<bool>(v)) return *b;
        throw bad(section, key, "a boolean");
    }

private:
    const ConfigValue* find(const std::string& section, const std::string& key) const {
        auto s = table_.find(section);
        if (s == table_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }
    Error bad(const std::string& section, const std::string& key, const char* what) const {
        return Error(Errc::parse, origin_ + ": [" + section + "] " + key + " must be " + what);
    }

    const ConfigTable& table_;
    std::filesystem::path base_;
    std::string origin_;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"service", {"host", "port", "event_log", "session_ttl_hours", "expansion_query"}},
        {"pipeline", {"top_k", "workers", "aggregation"}},
        {"bm25", {"k1", "b"}},
        {"dedup", {"shingle_k", "threshold"}},
        {"extractor", {"gazetteer", "transport", "url", "command", "timeout_ms", "fallback",
                       "max_connections"}},
        {"sources", {"fixture_dir"}},
        {"source", {"mode", "fixture_dir", "endpoint", "api_key_env", "timeout_ms", "max_results"}},
    };
    return keys;
}

} // namespace

ConfigTable parse_config_table(std::string_view text, const std::string& origin) {
    ConfigTable table;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = origin + ":" + std::to_string(line_no) + ": ";
        const auto content = trim(strip_comment(line));
        if (content.empty()) continue;
        if (content.front() == '[') {
            if (content.back() != ']') throw Error(Errc::parse, where + "unterminated section header");
            section = trim(std::string_view(content).substr(1, content.size() - 2));
            if (section.empty()) throw Error(Errc::parse, where + "empty section name");
            table[section];
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw Error(Errc::parse, where + "expected key = value");
        const auto key = trim(std::string_view(content).substr(0, eq));
        const auto raw = trim(std::string_view(content).substr(eq + 1));
        if (key.empty() || raw.empty()) throw Error(Errc::parse, where + "expected key = value");
        table[section][key] = parse_value(raw, where);
    }
    return table;
}

SourcesConfig SourcesConfig::from_fixture_dir(const std::filesystem::path& dir) {
    SourcesConfig config;
    for (auto s : {SourceKind::articles, SourceKind::companies, SourceKind::officers, SourceKind::web}) {
        SourceSettings settings;
        settings.fixture_dir = dir;
        config.sources[s] = settings;
    }
    return config;
}

ServiceConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::string& origin) {
    const auto table = parse_config_table(text, origin);
    for (const auto& [section, keys] : table) {
        std::string kind = section;
        if (section.rfind("sources.", 0) == 0) {
            auto src = parse_source(section.substr(8));
            if (!src || *src == SourceKind::fixture) {
                throw Error(Errc::parse, origin + ": unknown source section [" + section + "]");
            }
            kind = "source";
        }
        auto known = known_keys().find(kind);
        if (known == known_keys().end() && !section.empty()) {
            throw Error(Errc::parse, origin + ": unknown section [" + section + "]");
        }
        for (const auto& [key, value] : keys) {
            if (section.empty() || !known->second.contains(key)) {
                throw Error(Errc::parse, origin + ": unknown key '" + key + "' in [" + section + "]");
            }
        }
    }

    const Reader r(table, base_dir, origin);
    ServiceConfig cfg;
    auto fail = [&](const std::string& msg) { return Error(Errc::parse, origin + ": " + msg); };

    if (auto v = r.str("service", "host")) cfg.host = *v;
    if (auto v = r.integer("service", "port")) {
        if (*v < 0 || *v > 65535) throw fail("service.port out of range");
        cfg.port = static_cast<int>(*v);
    }
    if (auto v = r.path("service", "event_log")) cfg.event_log = *v;
    if (auto v = r.integer("service", "session_ttl_hours")) {
        if (*v <= 0) throw fail("service.session_ttl_hours must be positive");
        cfg.session_ttl = std::chrono::hours(*v);
    }
    if (auto v = r.str("service", "expansion_query")) {
        if (*v == "display") cfg.expansion_query = ExpansionQuery::display;
        else if (*v == "key") cfg.expansion_query = ExpansionQuery::key;
        else if (*v == "quoted") cfg.expansion_query = ExpansionQuery::quoted;
        else throw fail("service.expansion_query must be display, key or quoted");
    }

    auto& p = cfg.pipeline;
    if (auto v = r.integer("pipeline", "top_k")) {
        if (*v < 1) throw fail("pipeline.top_k must be at least 1");
        p.top_k = static_cast<std::size_t>(*v);
    }
    if (auto v = r.integer("pipeline", "workers")) {
        if (*v < 1) throw fail("pipeline.workers must be at least 1");
        p.workers = static_cast<unsigned>(*v);
    }
    if (auto v = r.str("pipeline", "aggregation")) {
        if (*v == "sum") p.aggregation = EntityAggregation::sum_over_docs;
        else if (*v == "max") p.aggregation = EntityAggregation::max_over_docs;
        else if (*v == "mentions") p.aggregation = EntityAggregation::mention_count;
        else throw fail("pipeline.aggregation must be sum, max or mentions");
    }
    if (auto v = r.real("bm25", "k1")) p.bm25.k1 = *v;
    if (auto v = r.real("bm25", "b")) p.bm25.b = *v;
    try {
        p.bm25.validate();
    } catch (const Error& e) {
        throw fail(e.what());
    }
    if (auto v = r.integer("dedup", "shingle_k")) {
        if (*v < 1) throw fail("dedup.shingle_k must be at least 1");
        p.dedup.shingle_k = static_cast<std::size_t>(*v);
    }
    if (auto v = r.real("dedup", "threshold")) {
        if (!(*v > 0.0 && *v <= 1.0)) throw fail("dedup.threshold must be in (0, 1]");
        p.dedup.threshold = *v;
    }

    p.gazetteer = r.path("extractor", "gazetteer");
    const auto transport = r.str("extractor", "transport").value_or("none");
    if (transport == "http" || transport == "stdio") {
        ExtractorEndpoint ep;
        ep.transport = transport == "http" ? ExtractorEndpoint::Transport::http
                                           : ExtractorEndpoint::Transport::stdio;
        ep.url = r.str("extractor", "url").value_or("");
        ep.command = r.str("extractor", "command").value_or("");
        if (ep.transport == ExtractorEndpoint::Transport::http && ep.url.empty()) {
            throw fail("extractor.url is required for the http transport");
        }
        if (ep.transport == ExtractorEndpoint::Transport::stdio && ep.command.empty()) {
            throw fail("extractor.command is required for the stdio transport");
        }
        if (auto v = r.integer("extractor", "timeout_ms")) ep.timeout = std::chrono::milliseconds(*v);
        if (auto v = r.boolean("extractor", "fallback")) ep.fallback = *v;
        if (auto v = r.integer("extractor", "max_connections")) ep.max_connections = static_cast<unsigned>(std::max<std::int64_t>(1, *v));
        p.extractor = ep;
    } else if (transport != "none") {
        throw fail("extractor.transport must be none, http or stdio");
    }

    const auto default_fixtures = r.path("sources", "fixture_dir");
    for (auto s : {SourceKind::articles, SourceKind::companies, SourceKind::officers, SourceKind::web}) {
        const std::string section = "sources." + std::string(source_name(s));
        SourceSettings settings;
        settings.fixture_dir = default_fixtures;
        if (auto v = r.str(section, "mode")) {
            if (*v == "fixture") settings.mode = SourceSettings::Mode::fixture;
            else if (*v == "live") settings.mode = SourceSettings::Mode::live;
            else throw fail(section + ".mode must be fixture or live");
        }
        if (auto v = r.path(section, "fixture_dir")) settings.fixture_dir = *v;
        if (auto v = r.str(section, "endpoint")) settings.endpoint = *v;
        if (auto v = r.str(section, "api_key_env")) settings.api_key_env = *v;
        if (auto v = r.integer(section, "timeout_ms")) settings.timeout = std::chrono::milliseconds(*v);
        if (auto v = r.integer(section, "max_results")) {
            if (*v < 1) throw fail(section + ".max_results must be at least 1");
            settings.max_results = static_cast<std::size_t>(*v);
        }
        if (settings.mode == SourceSettings::Mode::live && settings.endpoint.empty()) {
            throw fail(section + " is live but has no endpoint");
        }
        cfg.sources.sources[s] = settings;
    }
    return cfg;
}

ServiceConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path(), path.string());
}

} // namespace dminr
