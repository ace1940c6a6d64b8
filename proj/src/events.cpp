#include "dminr/events.hpp"

#include "dminr/error.hpp"
#include "dminr/tokenizer.hpp"

#include <set>

namespace dminr {

std::string_view event_kind_name(EventKind kind) noexcept {
    switch (kind) {
    case EventKind::query: return "query";
    case EventKind::tab_view: return "tab_view";
    case EventKind::clickthrough: return "clickthrough";
    case EventKind::expand: return "expand";
    }
    return "query";
}

std::optional<EventKind> parse_event_kind(std::string_view name) noexcept {
    for (auto k : {EventKind::query, EventKind::tab_view, EventKind::clickthrough, EventKind::expand}) {
        if (event_kind_name(k) == name) return k;
    }
    return std::nullopt;
}

bool is_valid_tab(std::string_view tab) noexcept {
    return tab == "articles" || tab == "companies" || tab == "officers" || tab == "web" ||
           tab == "connections";
}

namespace {

bool has_string(const json& payload, const char* key) {
    auto it = payload.find(key);
    return it != payload.end() && it->is_string() && !it->get<std::string>().empty();
}

} // namespace

void InteractionEvent::validate() const {
    if (session_id.empty()) throw Error(Errc::invalid_argument, "event without a session id");
    if (!payload.is_object()) throw Error(Errc::invalid_argument, "event payload must be an object");
    switch (kind) {
    case EventKind::query:
        if (!has_string(payload, "text")) throw Error(Errc::invalid_argument, "query event needs payload.text");
        break;
    case EventKind::tab_view:
        if (!has_string(payload, "tab") || !is_valid_tab(payload["tab"].get<std::string>())) {
            throw Error(Errc::invalid_argument,
                        "tab_view event needs payload.tab in articles|companies|officers|web|connections");
        }
        break;
    case EventKind::clickthrough:
        if (!has_string(payload, "doc_id")) {
            throw Error(Errc::invalid_argument, "clickthrough event needs payload.doc_id");
        }
        break;
    case EventKind::expand:
        if (!has_string(payload, "entity")) {
            throw Error(Errc::invalid_argument, "expand event needs payload.entity");
        }
        break;
    }
}

json event_to_json(const InteractionEvent& event) {
    json j;
    j["session"] = event.session_id;
    j["user"] = event.user;
    j["kind"] = event_kind_name(event.kind);
    j["ts"] = event.timestamp;
    j["payload"] = event.payload;
    return j;
}

InteractionEvent event_from_json(const json& record) {
    InteractionEvent e;
    try {
        e.session_id = record.at("session").get<std::string>();
        e.user = record.value("user", "");
        auto kind = parse_event_kind(record.at("kind").get<std::string>());
        if (!kind) throw Error(Errc::parse, "unknown event kind");
        e.kind = *kind;
        e.timestamp = record.value("ts", "");
        e.payload = record.value("payload", json::object());
    } catch (const json::exception& ex) {
        throw Error(Errc::parse, std::string("malformed event: ") + ex.what());
    }
    e.validate();
    return e;
}

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    out_.open(path_, std::ios::app);
    if (!out_) throw Error(Errc::io, "cannot open event log '" + path_.string() + "'");
}

void EventLog::append(const InteractionEvent& event) {
    event.validate();
    const std::string line = event_to_json(event).dump() + "\n";
    std::lock_guard lock(mutex_);
    out_ << line;
    out_.flush();
    if (!out_) throw Error(Errc::io, "cannot append to event log '" + path_.string() + "'");
}

std::vector<InteractionEvent> read_event_log(const std::filesystem::path& path) {
    std::vector<InteractionEvent> events;
    std::ifstream in(path);
    if (!in) return events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            events.push_back(event_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(Errc::parse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return events;
}

json metrics_to_json(const UsageMetrics& m) {
    json j;
    j["sessions"] = m.sessions;
    j["users"] = m.users;
    j["queries"] = m.queries;
    j["sessions_per_user"] = m.sessions_per_user;
    j["avg_query_length"] = m.avg_query_length;
    j["article_list_views"] = m.article_list_views;
    j["connections_views"] = m.connections_views;
    j["company_list_views"] = m.company_list_views;
    j["officer_list_views"] = m.officer_list_views;
    j["web_list_views"] = m.web_list_views;
    j["clickthroughs"] = m.clickthroughs;
    return j;
}

std::map<std::string, std::string> session_users_from_log(std::span<const InteractionEvent> log) {
    std::map<std::string, std::string> out;
    for (const auto& e : log) {
        if (!e.user.empty()) out.emplace(e.session_id, e.user);
    }
    return out;
}

UsageMetrics compute_metrics(std::span<const InteractionEvent> log,
                             const std::map<std::string, std::string>& session_users) {
    std::map<std::string, std::string> owner = session_users;
    for (const auto& e : log) owner.emplace(e.session_id, e.user);

    std::set<std::string> users;
    for (const auto& [session, user] : owner) users.insert(user);

    std::size_t query_tokens = 0;
    std::size_t articles = 0, connections = 0, companies = 0, officers = 0, web = 0, clicks = 0;
    UsageMetrics m;
    for (const auto& e : log) {
        switch (e.kind) {
        case EventKind::query:
            ++m.queries;
            query_tokens += tokenize(e.payload.value("text", "")).size();
            break;
        case EventKind::tab_view: {
            const auto tab = e.payload.value("tab", "");
            if (tab == "articles") ++articles;
            else if (tab == "connections") ++connections;
            else if (tab == "companies") ++companies;
            else if (tab == "officers") ++officers;
            else if (tab == "web") ++web;
            break;
        }
        case EventKind::clickthrough: ++clicks; break;
        case EventKind::expand: break;
        }
    }

    m.sessions = owner.size();
    m.users = users.size();
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    m.sessions_per_user = ratio(m.sessions, m.users);
    m.avg_query_length = ratio(query_tokens, m.queries);
    m.article_list_views = ratio(articles, m.sessions);
    m.connections_views = ratio(connections, m.sessions);
    m.company_list_views = ratio(companies, m.sessions);
    m.officer_list_views = ratio(officers, m.sessions);
    m.web_list_views = ratio(web, m.sessions);
    m.clickthroughs = ratio(clicks, m.sessions);
    return m;
}

} // namespace dminr
