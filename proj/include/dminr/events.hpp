#pragma once

#include "dminr/document.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace dminr {

enum class EventKind { query, tab_view, clickthrough, expand };

std::string_view event_kind_name(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view name) noexcept;

// Tabs a tab_view event can name: the four sources plus the connection graph.
bool is_valid_tab(std::string_view tab) noexcept;

// One logged user interaction. Payloads by kind:
//   query        {"text": "..."}
//   tab_view     {"tab": "articles"|"companies"|"officers"|"web"|"connections"}
//   clickthrough {"doc_id": "..."}
//   expand       {"entity": "..."}
struct InteractionEvent {
    std::string session_id;
    std::string user;
    EventKind kind = EventKind::query;
    std::string timestamp;
    json payload = json::object();

    // Throws Error(invalid_argument) when the kind-specific payload is missing.
    void validate() const;
};

json event_to_json(const InteractionEvent& event);
InteractionEvent event_from_json(const json& record);

// Append-only JSONL log; each append writes and flushes one whole line.
class EventLog {
public:
    explicit EventLog(std::filesystem::path path);

    void append(const InteractionEvent& event);
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
    std::ofstream out_;
};

// Reads a log written by EventLog. A missing file is an empty log.
std::vector<InteractionEvent> read_event_log(const std::filesystem::path& path);

struct UsageMetrics {
    std::size_t sessions = 0;
    std::size_t users = 0;
    std::size_t queries = 0;
    double sessions_per_user = 0.0;
    double avg_query_length = 0.0; // tokens per query
    double article_list_views = 0.0;
    double connections_views = 0.0;
    double company_list_views = 0.0;
    double officer_list_views = 0.0;
    double web_list_views = 0.0;
    double clickthroughs = 0.0;
};

json metrics_to_json(const UsageMetrics& metrics);

// Sessions are the keys of `session_users` plus any session in the log;
// users are the distinct owners (falling back to the event's user field).
// Per-session rates divide event totals by the session count. Any ratio with
// a zero denominator is 0.
UsageMetrics compute_metrics(std::span<const InteractionEvent> log,
                             const std::map<std::string, std::string>& session_users);

// Session -> user as recorded on the events themselves.
std::map<std::string, std::string> session_users_from_log(std::span<const InteractionEvent> log);

} // namespace dminr
