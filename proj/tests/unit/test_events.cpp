#include "dminr/error.hpp"
#include "dminr/events.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <thread>

using namespace dminr;

namespace {

InteractionEvent event(std::string session, std::string user, EventKind kind, json payload) {
    return {std::move(session), std::move(user), kind, "2021-06-04T10:00:00Z", std::move(payload)};
}

InteractionEvent query(std::string s, std::string u, std::string text) {
    return event(std::move(s), std::move(u), EventKind::query, {{"text", std::move(text)}});
}

InteractionEvent tab(std::string s, std::string u, std::string name) {
    return event(std::move(s), std::move(u), EventKind::tab_view, {{"tab", std::move(name)}});
}

} // namespace

TEST(Events, PayloadValidation) {
    EXPECT_NO_THROW(tab("s", "u", "connections").validate());
    EXPECT_THROW(tab("s", "u", "graph").validate(), Error);
    EXPECT_THROW(event("s", "u", EventKind::clickthrough, json::object()).validate(), Error);
    EXPECT_THROW(event("s", "u", EventKind::expand, {{"entity", ""}}).validate(), Error);
    EXPECT_THROW(query("", "u", "acme").validate(), Error);
    EXPECT_NO_THROW(event("s", "u", EventKind::clickthrough, {{"doc_id", "art-001"}}).validate());
}

TEST(Events, JsonRoundTrip) {
    const auto e = event("s1", "u1", EventKind::expand, {{"entity", "ORG:acme corp"}});
    const auto back = event_from_json(event_to_json(e));
    EXPECT_EQ(back.session_id, "s1");
    EXPECT_EQ(back.user, "u1");
    EXPECT_EQ(back.kind, EventKind::expand);
    EXPECT_EQ(back.payload, e.payload);
    EXPECT_THROW(event_from_json(json::parse(R"({"session":"s","kind":"scroll","payload":{}})")), Error);
}

TEST(EventLog, AppendsLinesAndReadsBack) {
    oracle::TempDir dir("log");
    {
        EventLog log(dir / "sub" / "events.jsonl");
        log.append(query("s1", "u1", "acme corp"));
        log.append(tab("s1", "u1", "connections"));
        EXPECT_THROW(log.append(tab("s1", "u1", "nope")), Error);
    }
    const auto events = read_event_log(dir / "sub" / "events.jsonl");
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(events[1].payload["tab"], "connections");
    EXPECT_TRUE(read_event_log(dir / "missing.jsonl").empty());
    {
        std::ofstream out(dir / "bad.jsonl");
        out << event_to_json(query("s", "u", "x")).dump() << "\n{broken\n";
    }
    try {
        read_event_log(dir / "bad.jsonl");
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos);
    }
}

TEST(EventLog, ConcurrentAppendsKeepWholeLinesAndPerThreadOrder) {
    oracle::TempDir dir("log");
    {
        EventLog log(dir / "events.jsonl");
        std::vector<std::thread> threads;
        for (int t = 0; t < 4; ++t) {
            threads.emplace_back([&log, t] {
                for (int i = 0; i < 25; ++i) {
                    log.append(event("s" + std::to_string(t), "u", EventKind::clickthrough,
                                     {{"doc_id", std::to_string(i)}}));
                }
            });
        }
        for (auto& t : threads) t.join();
    }
    const auto events = read_event_log(dir / "events.jsonl");
    ASSERT_EQ(events.size(), 100u);
    std::map<std::string, int> next;
    for (const auto& e : events) {
        EXPECT_EQ(e.payload["doc_id"], std::to_string(next[e.session_id]++));
    }
}

TEST(Metrics, FiveUsersFourteenSessions) {
    std::vector<InteractionEvent> log;
    std::map<std::string, std::string> owners;
    for (int s = 0; s < 14; ++s) {
        const auto session = "s" + std::to_string(s);
        const auto user = "u" + std::to_string(s % 5);
        owners[session] = user;
        log.push_back(query(session, user, "acme corp"));
    }
    const auto m = compute_metrics(log, owners);
    EXPECT_EQ(m.sessions, 14u);
    EXPECT_EQ(m.users, 5u);
    EXPECT_NEAR(m.sessions_per_user, 2.8, 1e-12);
}

TEST(Metrics, QueryLengthIsMeanTokenCount) {
    // 50 queries: 3 of three tokens and 47 of two -> 103 / 50 = 2.06.
    std::vector<InteractionEvent> log;
    for (int i = 0; i < 50; ++i) log.push_back(query("s" + std::to_string(i), "u", i < 3 ? "gamma aerospace ltd" : "acme corp"));
    EXPECT_NEAR(compute_metrics(log, {}).avg_query_length, 2.06, 1e-9);
}

TEST(Metrics, HandComputedSmallLog) {
    // 4 sessions, 2 users; totals: articles 6, connections 3, companies 2,
    // officers 1, web 0, clicks 2.
    const std::vector<InteractionEvent> log{
        query("a", "u1", "acme"),          tab("a", "u1", "articles"),    tab("a", "u1", "articles"),
        tab("a", "u1", "connections"),     query("b", "u1", "acme corp"), tab("b", "u1", "articles"),
        tab("b", "u1", "companies"),       tab("b", "u1", "officers"),    query("c", "u2", "right to repair"),
        tab("c", "u2", "articles"),        tab("c", "u2", "articles"),    tab("c", "u2", "connections"),
        event("c", "u2", EventKind::clickthrough, {{"doc_id", "art-006"}}),
        query("d", "u2", "mars"),          tab("d", "u2", "articles"),    tab("d", "u2", "connections"),
        tab("d", "u2", "companies"),       event("d", "u2", EventKind::clickthrough, {{"doc_id", "x"}}),
        event("d", "u2", EventKind::expand, {{"entity", "LOC:mars"}})};
    auto m = compute_metrics(log, {});
    EXPECT_EQ(m.sessions, 4u);
    EXPECT_DOUBLE_EQ(m.sessions_per_user, 2.0);
    EXPECT_DOUBLE_EQ(m.avg_query_length, 7.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.article_list_views, 6.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.connections_views, 3.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.company_list_views, 2.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.officer_list_views, 1.0 / 4.0);
    EXPECT_DOUBLE_EQ(m.web_list_views, 0.0);
    EXPECT_DOUBLE_EQ(m.clickthroughs, 2.0 / 4.0);

    // Permutation invariance.
    auto shuffled = log;
    std::mt19937_64 rng(6);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        EXPECT_EQ(metrics_to_json(compute_metrics(shuffled, {})), metrics_to_json(m));
    }

    // A session known only from the ownership map still counts.
    m = compute_metrics(log, {{"e", "u3"}});
    EXPECT_EQ(m.sessions, 5u);
    EXPECT_EQ(m.users, 3u);
}

TEST(Metrics, EmptyLogIsAllZero) {
    const auto m = compute_metrics(std::vector<InteractionEvent>{}, {});
    EXPECT_EQ(m.sessions, 0u);
    EXPECT_EQ(m.sessions_per_user, 0.0);
    EXPECT_EQ(m.avg_query_length, 0.0);
    EXPECT_EQ(m.article_list_views, 0.0);
    EXPECT_EQ(m.clickthroughs, 0.0);
}

TEST(Metrics, ShippedReplayLogMatchesStudyFigures) {
    const auto log = read_event_log(oracle::fixture_path("replay/events.jsonl"));
    const auto m = compute_metrics(log, session_users_from_log(log));
    EXPECT_EQ(m.sessions, 700u);
    EXPECT_EQ(m.users, 250u);
    EXPECT_NEAR(m.sessions_per_user, 2.8, 1e-9);
    EXPECT_NEAR(m.avg_query_length, 2.06, 1e-9);
}
