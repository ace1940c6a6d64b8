#include "dminr/service.hpp"

#include "dminr/corpus.hpp"
#include "dminr/error.hpp"
#include "dminr/tokenizer.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <set>

namespace dminr {

namespace {

template <typename Fn>
auto in_stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(name, e.code(), e.what());
    } catch (const std::exception& e) {
        throw StageError(name, Errc::internal, e.what());
    }
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

json session_payload(const Session& session) {
    json j;
    j["session_id"] = session.id;
    j["tabs"] = tabset_to_json(session.tabs);
    j["entities"] = ranked_entities_to_json(session.ranked);
    j["graph"] = export_graph(session.graph);
    return j;
}

SessionService::SessionService(ServiceConfig config, WallClock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      hub_(config_.sources, clock_),
      pipeline_(config_.pipeline),
      log_(config_.event_log),
      id_rng_(std::random_device{}()) {}

std::string SessionService::new_session_id() {
    std::lock_guard lock(sessions_mutex_);
    for (;;) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "s-%016llx", static_cast<unsigned long long>(id_rng_()));
        if (!sessions_.contains(buf)) return buf;
    }
}

std::shared_ptr<SessionService::Slot> SessionService::find(const std::string& session_id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw Error(Errc::not_found, "unknown session '" + session_id + "'");
    std::shared_lock state(it->second->state_mutex);
    if (clock_() - it->second->state.last_active > config_.session_ttl) {
        state.unlock();
        sessions_.erase(it);
        throw Error(Errc::expired, "session '" + session_id + "' has expired");
    }
    return it->second;
}

void SessionService::log(const Session& session, EventKind kind, json payload) {
    InteractionEvent e;
    e.session_id = session.id;
    e.user = session.user;
    e.kind = kind;
    e.timestamp = iso8601_utc(clock_());
    e.payload = std::move(payload);
    log_.append(e);
}

json SessionService::create_session(const std::string& user, const std::string& query) {
    if (blank(query)) throw Error(Errc::invalid_argument, "query is empty");

    auto slot = std::make_shared<Slot>();
    Session& s = slot->state;
    s.id = new_session_id();
    s.user = user;
    s.created_at = s.last_active = clock_();
    s.queries.emplace_back(query, iso8601_utc(s.created_at));

    s.tabs = in_stage("search", [&] { return hub_.search_all(query); });
    const auto candidates = s.tabs.all_items();
    const auto report = in_stage("dedup", [&] { return dedup(candidates, config_.pipeline.dedup); });
    const std::set<std::string> kept(report.kept.begin(), report.kept.end());
    for (const auto& d : candidates) {
        if (kept.contains(d.id)) s.corpus.push_back(d);
    }

    auto result = pipeline_.run(s.corpus, query);
    for (const auto& f : result.extractor_failures) spdlog::warn("extractor fallback: {}", f);
    s.index = std::move(result.index);
    s.ranked = std::move(result.ranked);
    s.graph = std::move(result.graph);

    json payload = session_payload(s);
    {
        std::lock_guard lock(sessions_mutex_);
        sessions_.emplace(s.id, slot);
    }
    log(s, EventKind::query, {{"text", query}});
    return payload;
}

std::string SessionService::expansion_text(const GraphNode& node) const {
    switch (config_.expansion_query) {
    case ExpansionQuery::display: return node.display;
    case ExpansionQuery::key: return node.key.surface;
    case ExpansionQuery::quoted: return "\"" + node.display + "\"";
    }
    return node.display;
}

json SessionService::expand(const std::string& session_id, const std::string& entity_id) {
    auto slot = find(session_id);
    std::lock_guard writer(slot->writer);

    Session next;
    {
        std::shared_lock read(slot->state_mutex);
        next = slot->state;
    }
    auto key = EntityKey::parse(entity_id);
    if (!key || !next.graph.nodes.contains(*key)) {
        throw Error(Errc::not_found, "entity '" + entity_id + "' is not in the session graph");
    }
    const auto& node = next.graph.nodes.at(*key);
    const std::string query = expansion_text(node);

    // Officers are listed for the registry companies this organisation names.
    std::vector<std::string> parents;
    if (key->label == EntityLabel::ORG) {
        const auto wanted = token_texts(node.display);
        for (const auto& d : next.corpus) {
            if (d.source != SourceKind::companies) continue;
            const auto title = token_texts(d.title);
            const std::set<std::string> have(title.begin(), title.end());
            if (std::all_of(wanted.begin(), wanted.end(), [&](const auto& t) { return have.contains(t); })) {
                parents.push_back(d.id);
            }
        }
    }

    next.tabs = in_stage("search", [&] { return hub_.search_all(query, parents); });
    const auto candidates = next.tabs.all_items();
    const auto report = in_stage("dedup", [&] {
        return dedup_against(next.corpus, candidates, config_.pipeline.dedup);
    });
    const std::set<std::string> kept(report.kept.begin(), report.kept.end());
    for (const auto& d : candidates) {
        if (kept.contains(d.id)) next.corpus.push_back(d);
    }

    auto result = pipeline_.run(next.corpus, query);
    for (const auto& f : result.extractor_failures) spdlog::warn("extractor fallback: {}", f);
    next.index = std::move(result.index);
    next.ranked = std::move(result.ranked);
    next.graph = merge(next.graph, result.graph);
    next.last_active = clock_();
    next.queries.emplace_back(query, iso8601_utc(next.last_active));

    json graph = export_graph(next.graph);
    {
        std::unique_lock write(slot->state_mutex);
        slot->state = std::move(next);
    }
    log(slot->state, EventKind::expand, {{"entity", entity_id}, {"query", query}});
    return graph;
}

json SessionService::graph(const std::string& session_id) {
    auto slot = find(session_id);
    std::shared_lock read(slot->state_mutex);
    return export_graph(slot->state.graph);
}

json SessionService::tab(const std::string& session_id, const std::string& source) {
    auto kind = parse_source(source);
    if (!kind || *kind == SourceKind::fixture) {
        throw Error(Errc::invalid_argument, "unknown source '" + source + "'");
    }
    auto slot = find(session_id);
    std::shared_lock read(slot->state_mutex);
    auto it = slot->state.tabs.tabs.find(*kind);
    if (it == slot->state.tabs.tabs.end()) throw Error(Errc::not_found, "no results for " + source);
    return source_result_to_json(it->second);
}

json SessionService::document(const std::string& session_id, const std::string& doc_id) {
    auto slot = find(session_id);
    std::shared_lock read(slot->state_mutex);
    for (const auto& d : slot->state.corpus) {
        if (d.id == doc_id) return document_to_json(d);
    }
    for (const auto& d : slot->state.tabs.all_items()) {
        if (d.id == doc_id) return document_to_json(d);
    }
    throw Error(Errc::not_found, "document '" + doc_id + "' is not part of session " + session_id);
}

void SessionService::log_event(const std::string& session_id, const std::string& kind,
                               const json& payload) {
    auto parsed = parse_event_kind(kind);
    if (!parsed) throw Error(Errc::invalid_argument, "unknown event kind '" + kind + "'");
    auto slot = find(session_id);
    std::string user;
    {
        std::unique_lock write(slot->state_mutex);
        slot->state.last_active = clock_();
        user = slot->state.user;
    }
    InteractionEvent e;
    e.session_id = session_id;
    e.user = user;
    e.kind = *parsed;
    e.timestamp = iso8601_utc(clock_());
    e.payload = payload.is_null() ? json::object() : payload;
    log_.append(e);
}

UsageMetrics SessionService::metrics() const {
    const auto events = read_event_log(log_.path());
    return compute_metrics(events, session_users_from_log(events));
}

Session SessionService::snapshot(const std::string& session_id) {
    auto slot = find(session_id);
    std::shared_lock read(slot->state_mutex);
    return slot->state;
}

std::size_t SessionService::expire_idle() {
    std::lock_guard lock(sessions_mutex_);
    const auto now = clock_();
    return std::erase_if(sessions_, [&](const auto& entry) {
        std::shared_lock read(entry.second->state_mutex);
        return now - entry.second->state.last_active > config_.session_ttl;
    });
}

} // namespace dminr
