#pragma once

#include "dminr/config.hpp"
#include "dminr/events.hpp"
#include "dminr/graph.hpp"
#include "dminr/pipeline.hpp"
#include "dminr/sources.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace dminr {

struct Session {
    std::string id;
    std::string user;
    std::vector<std::pair<std::string, std::string>> queries; // (text, timestamp)
    std::vector<Document> corpus;
    InvertedIndex index; // always the index of `corpus`
    RankedEntities ranked;
    ConnectionGraph graph;
    TabSet tabs;
    std::chrono::system_clock::time_point created_at;
    std::chrono::system_clock::time_point last_active;
};

// Owns the live sessions and the event log. Create and expand are serialised
// per session; reads and event logging run concurrently.
class SessionService {
public:
    explicit SessionService(ServiceConfig config, WallClock clock = system_wall_clock());

    // search -> dedup -> index -> extract -> rank -> graph. Returns
    // {"session_id", "tabs", "entities", "graph"} and logs a query event.
    // Throws Error(invalid_argument) for an empty query and StageError when a
    // pipeline stage fails.
    json create_session(const std::string& user, const std::string& query);

    // Searches for the entity's display text, adds the unseen documents,
    // re-runs the pipeline over the whole corpus and merges the new graph
    // into the old one. Returns the merged graph export and logs an expand event.
    json expand(const std::string& session_id, const std::string& entity_id);

    json graph(const std::string& session_id);
    json tab(const std::string& session_id, const std::string& source);
    json document(const std::string& session_id, const std::string& doc_id);

    // Validates and appends {kind, payload} for the session.
    void log_event(const std::string& session_id, const std::string& kind, const json& payload);

    UsageMetrics metrics() const;

    // Copy of the current state (tests and diagnostics).
    Session snapshot(const std::string& session_id);

    // Drops sessions idle for longer than the configured TTL.
    std::size_t expire_idle();

    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Slot {
        std::mutex writer;
        std::shared_mutex state_mutex;
        Session state;
    };

    std::shared_ptr<Slot> find(const std::string& session_id);
    void log(const Session& session, EventKind kind, json payload);
    std::string expansion_text(const GraphNode& node) const;
    std::string new_session_id();

    ServiceConfig config_;
    WallClock clock_;
    SourceHub hub_;
    EntityPipeline pipeline_;
    EventLog log_;

    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::mt19937_64 id_rng_;
};

json session_payload(const Session& session);

} // namespace dminr
