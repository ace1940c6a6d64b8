#pragma once

// Shared set-up for tests that run the session service over the shipped fixtures.

#include "dminr/config.hpp"
#include "dminr/service.hpp"

#include "oracles.hpp"

#include <atomic>
#include <fstream>
#include <memory>

namespace oracle {

// A wall clock the test can move forward.
struct ManualClock {
    std::shared_ptr<std::atomic<long long>> seconds = std::make_shared<std::atomic<long long>>(1622800000);

    dminr::WallClock clock() const {
        auto s = seconds;
        return [s] { return std::chrono::system_clock::time_point{} + std::chrono::seconds(s->load()); };
    }
    void advance(std::chrono::seconds by) const { *seconds += by.count(); }
};

inline dminr::ServiceConfig fixture_service_config(const std::filesystem::path& event_log) {
    dminr::ServiceConfig config;
    config.sources = dminr::SourcesConfig::from_fixture_dir(fixture_path("sources"));
    config.pipeline.gazetteer = fixture_path("gazetteer.tsv");
    config.event_log = event_log;
    return config;
}

// Replaces the per-run parts of a session payload (id, fetch times).
inline dminr::json normalize_payload(dminr::json payload) {
    if (payload.contains("session_id")) payload["session_id"] = "<session>";
    if (payload.contains("tabs")) {
        for (auto& [name, tab] : payload["tabs"].items()) tab["fetched_at"] = "<fetched_at>";
    }
    return payload;
}

inline std::string golden_path() { return fixture_path("golden/acme_corp_session.json"); }

inline dminr::json read_golden() {
    std::ifstream in(golden_path());
    if (!in) return nullptr;
    return dminr::json::parse(in);
}

// Set DMINR_UPDATE_GOLDEN=1 to rewrite the golden file from the current output.
inline bool update_golden_requested() {
    const char* v = std::getenv("DMINR_UPDATE_GOLDEN");
    return v && std::string(v) == "1";
}

inline void write_golden(const dminr::json& payload) {
    std::filesystem::create_directories(std::filesystem::path(golden_path()).parent_path());
    std::ofstream(golden_path()) << payload.dump(2) << "\n";
}

} // namespace oracle
