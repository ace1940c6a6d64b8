#include "dminr/error.hpp"
#include "dminr/http_api.hpp"

#include "service_fixture.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

using namespace dminr;

namespace {

class HttpApiTest : public ::testing::Test {
protected:
    oracle::TempDir dir{"http"};
    oracle::ManualClock clock;
    SessionService service{oracle::fixture_service_config(dir / "events.jsonl"), clock.clock()};
    ApiServer server{service};
    int port = server.start("127.0.0.1", 0);
    httplib::Client client{"127.0.0.1", port};

    json post(const std::string& path, const json& body, int expected_status = 200) {
        auto res = client.Post(path, body.dump(), "application/json");
        EXPECT_TRUE(res) << path;
        if (!res) return nullptr;
        EXPECT_EQ(res->status, expected_status) << path << ": " << res->body;
        return json::parse(res->body);
    }
    json get(const std::string& path, int expected_status = 200) {
        auto res = client.Get(path);
        EXPECT_TRUE(res) << path;
        if (!res) return nullptr;
        EXPECT_EQ(res->status, expected_status) << path << ": " << res->body;
        return json::parse(res->body);
    }
    std::string new_session() {
        return post("/api/session", {{"user", "u"}, {"query", "acme corp"}})["session_id"].get<std::string>();
    }
};

} // namespace

TEST(HttpStatus, ConventionalCodes) {
    EXPECT_EQ(http_status_for(Errc::invalid_argument), 400);
    EXPECT_EQ(http_status_for(Errc::not_found), 404);
    EXPECT_EQ(http_status_for(Errc::expired), 410);
    EXPECT_EQ(http_status_for(Errc::timeout), 504);
    EXPECT_EQ(http_status_for(Errc::internal), 500);
}

TEST_F(HttpApiTest, SessionPayloadMatchesGolden) {
    const auto payload = post("/api/session", {{"user", "reporter"}, {"query", "acme corp"}});
    const auto golden = oracle::read_golden();
    ASSERT_FALSE(golden.is_null());
    EXPECT_EQ(oracle::normalize_payload(payload).dump(2), golden.dump(2));
}

TEST_F(HttpApiTest, GraphTabDocAndExpand) {
    const auto id = new_session();
    const auto graph = get("/api/session/" + id + "/graph");
    EXPECT_FALSE(graph["nodes"].empty());
    const auto tab = get("/api/session/" + id + "/tab/articles");
    EXPECT_EQ(tab["items"].size(), 4u);
    EXPECT_EQ(get("/api/doc/" + id + "/art-001")["id"], "art-001");

    const auto expanded = post("/api/session/" + id + "/expand", {{"entity", "ORG:acme corp"}});
    EXPECT_GT(expanded["nodes"].size(), graph["nodes"].size());
    EXPECT_EQ(get("/api/session/" + id + "/graph").dump(), expanded.dump());
    const auto again = post("/api/session/" + id + "/expand", {{"entity", "ORG:acme corp"}});
    EXPECT_EQ(again.dump(), expanded.dump());
}

TEST_F(HttpApiTest, EventsAndMetrics) {
    const auto id = new_session();
    EXPECT_EQ(post("/api/session/" + id + "/event", {{"kind", "tab_view"}, {"payload", {{"tab", "connections"}}}}),
              json({{"ok", true}}));
    post("/api/session/" + id + "/event", {{"kind", "clickthrough"}, {"payload", {{"doc_id", "art-001"}}}});
    const auto m = get("/api/metrics");
    EXPECT_EQ(m["sessions"], 1);
    EXPECT_EQ(m["connections_views"], 1.0);
    EXPECT_EQ(m["clickthroughs"], 1.0);
    EXPECT_EQ(m["avg_query_length"], 2.0);
}

TEST_F(HttpApiTest, ErrorEnvelope) {
    auto err = post("/api/session", {{"user", "u"}, {"query", ""}}, 400);
    EXPECT_TRUE(err["error"].contains("stage"));
    EXPECT_TRUE(err["error"].contains("message"));
    post("/api/session", {{"user", "u"}}, 400);
    auto res = client.Post("/api/session", "{not json", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    get("/api/session/s-missing/graph", 404);
    const auto id = new_session();
    err = post("/api/session/" + id + "/expand", {{"entity", "PER:nobody"}}, 404);
    EXPECT_EQ(err["error"]["stage"], "expand");
    post("/api/session/" + id + "/event", {{"kind", "clickthrough"}, {"payload", json::object()}}, 400);
    get("/api/session/" + id + "/tab/radio", 400);
    get("/api/doc/" + id + "/nothing", 404);
    clock.advance(std::chrono::hours(48));
    get("/api/session/" + id + "/graph", 410);
}
