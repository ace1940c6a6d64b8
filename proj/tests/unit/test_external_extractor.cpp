#include "dminr/error.hpp"
#include "dminr/external_extractor.hpp"
#include "dminr/tokenizer.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <sstream>
#include <thread>

using namespace dminr;

namespace {

const BioTag O = BioTag::outside();

Document doc(std::string body) { return {"d1", SourceKind::articles, "", std::move(body), "", {}, {}}; }

Gazetteer gazetteer() {
    std::istringstream in("jane doe\tPER\nlondon\tLOC\n");
    return parse_gazetteer(in);
}

ExtractorEndpoint stdio_endpoint(const std::string& mode, std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
    ExtractorEndpoint e;
    e.transport = ExtractorEndpoint::Transport::stdio;
    e.command = std::string(DMINR_EXTRACTOR_STUB) + " " + mode;
    e.timeout = timeout;
    return e;
}

// In-process HTTP model answering POST /extract.
class StubServer {
public:
    explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
        server_.Post("/extract", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace

TEST(ExtractProtocol, RequestAndResponseJson) {
    EXPECT_EQ(extract_request_json("d1", {"Acme", "Corp"}).dump(), R"({"doc_id":"d1","tokens":["Acme","Corp"]})");
    EXPECT_EQ(parse_extract_response(json::parse(R"({"tags":["B-ORG","I-ORG","O"]})")),
              (std::vector<BioTag>{BioTag::begin(EntityLabel::ORG), BioTag::inside(EntityLabel::ORG), O}));
    EXPECT_THROW(parse_extract_response(json::parse(R"({"tags":["B-XYZ"]})")), Error);
    EXPECT_THROW(parse_extract_response(json::parse(R"({"labels":[]})")), Error);
    EXPECT_THROW(parse_extract_response(json::parse(R"({"tags":[1]})")), Error);
}

TEST(StdioExtractor, AllOutsidePassesThrough) {
    auto extractor = connect_extractor(stdio_endpoint("outside"));
    const auto d = doc("Jane Doe visited London");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, *extractor, gazetteer(), false);
    EXPECT_FALSE(result.fell_back);
    EXPECT_EQ(result.tags, std::vector<BioTag>(4, O));
}

TEST(StdioExtractor, SendsOriginalCaseTokensAndKeepsProcessAlive) {
    auto extractor = connect_extractor(stdio_endpoint("caps"));
    for (int i = 0; i < 3; ++i) {
        const auto d = doc("met Jane Doe today");
        const auto tokens = tokenize(d.body);
        const auto result = external_extract(d, tokens, *extractor, gazetteer(), false);
        EXPECT_EQ(result.tags, (std::vector<BioTag>{O, BioTag::begin(EntityLabel::PER),
                                                   BioTag::inside(EntityLabel::PER), O}));
    }
}

TEST(StdioExtractor, OrphanInsideTagsRepaired) {
    auto extractor = connect_extractor(stdio_endpoint("orphan"));
    const auto d = doc("acme corp");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, *extractor, Gazetteer{}, false);
    EXPECT_EQ(result.tags, (std::vector<BioTag>{BioTag::begin(EntityLabel::ORG), BioTag::inside(EntityLabel::ORG)}));
    EXPECT_TRUE(is_bio_valid(result.tags));
}

TEST(StdioExtractor, WrongLengthFallsBack) {
    auto extractor = connect_extractor(stdio_endpoint("short"));
    const auto d = doc("we met Jane Doe in London");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, *extractor, gazetteer(), true);
    EXPECT_TRUE(result.fell_back);
    EXPECT_NE(result.failure.find("length_mismatch"), std::string::npos) << result.failure;
    EXPECT_EQ(result.tags, label_tokens(d, tokens, gazetteer()));
    try {
        external_extract(d, tokens, *extractor, gazetteer(), false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::length_mismatch);
    }
}

TEST(StdioExtractor, GarbageIsProtocolError) {
    auto extractor = connect_extractor(stdio_endpoint("garbage"));
    try {
        extractor->exchange("d1", {"a"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::protocol);
    }
}

TEST(StdioExtractor, SilentModelTimesOut) {
    auto extractor = connect_extractor(stdio_endpoint("silent", std::chrono::milliseconds(200)));
    const auto start = std::chrono::steady_clock::now();
    try {
        extractor->exchange("d1", {"a"});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::timeout);
    }
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(StdioExtractor, MissingCommandFallsBack) {
    ExtractorEndpoint e = stdio_endpoint("");
    e.command = "/nonexistent/model-binary";
    e.timeout = std::chrono::milliseconds(500);
    auto broken = connect_extractor(e);
    const auto d = doc("Jane Doe in London");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, *broken, gazetteer(), true);
    EXPECT_TRUE(result.fell_back);
    EXPECT_EQ(result.tags, label_tokens(d, tokens, gazetteer()));
}

TEST(HttpExtractor, RoundTripAgainstStubServer) {
    StubServer server([](const httplib::Request& req, httplib::Response& res) {
        const auto body = json::parse(req.body);
        json tags = json::array();
        for (const auto& t : body["tokens"]) tags.push_back(t.get<std::string>() == "London" ? "B-LOC" : "O");
        res.set_content(json{{"tags", tags}}.dump(), "application/json");
    });
    ExtractorEndpoint e;
    e.url = server.url();
    auto extractor = connect_extractor(e);
    const auto d = doc("flights to London");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, *extractor, Gazetteer{}, false);
    EXPECT_EQ(result.tags, (std::vector<BioTag>{O, O, BioTag::begin(EntityLabel::LOC)}));
}

TEST(HttpExtractor, ErrorStatusIsProtocolError) {
    StubServer server([](const httplib::Request&, httplib::Response& res) { res.status = 500; });
    ExtractorEndpoint e;
    e.url = server.url();
    HttpExtractor extractor(e);
    try {
        extractor.exchange("d1", {"a"});
        FAIL();
    } catch (const Error& ex) {
        EXPECT_EQ(ex.code(), Errc::protocol);
    }
}

TEST(HttpExtractor, UnreachableFallsBackToBaseline) {
    ExtractorEndpoint e;
    e.url = "http://127.0.0.1:1";
    e.timeout = std::chrono::milliseconds(500);
    HttpExtractor extractor(e);
    const auto d = doc("Jane Doe in London");
    const auto tokens = tokenize(d.body);
    const auto result = external_extract(d, tokens, extractor, gazetteer(), true);
    EXPECT_TRUE(result.fell_back);
    EXPECT_EQ(result.tags, label_tokens(d, tokens, gazetteer()));
    EXPECT_THROW(external_extract(d, tokens, extractor, gazetteer(), false), Error);
}

TEST(HttpExtractor, SlowServerTimesOut) {
    StubServer server([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1500));
        res.set_content(R"({"tags":["O"]})", "application/json");
    });
    ExtractorEndpoint e;
    e.url = server.url();
    e.timeout = std::chrono::milliseconds(300);
    HttpExtractor extractor(e);
    try {
        extractor.exchange("d1", {"a"});
        FAIL();
    } catch (const Error& ex) {
        EXPECT_EQ(ex.code(), Errc::timeout);
    }
}

TEST(HttpExtractor, ConcurrentCallsCappedByConnectionLimit) {
    std::atomic<int> active{0};
    std::atomic<int> peak{0};
    StubServer server([&](const httplib::Request& req, httplib::Response& res) {
        const int now = ++active;
        int seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        --active;
        const auto n = json::parse(req.body)["tokens"].size();
        res.set_content(json{{"tags", std::vector<std::string>(n, "O")}}.dump(), "application/json");
    });
    ExtractorEndpoint e;
    e.url = server.url();
    e.max_connections = 2;
    HttpExtractor extractor(e);
    std::vector<std::thread> threads;
    for (int i = 0; i < 6; ++i) {
        threads.emplace_back([&extractor, i] { extractor.exchange("d" + std::to_string(i), {"a", "b"}); });
    }
    for (auto& t : threads) t.join();
    EXPECT_LE(peak.load(), 2);
    EXPECT_GE(peak.load(), 1);
}
