#include "dminr/error.hpp"
#include "dminr/graph.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace dminr;

namespace {

Entity entity(std::string surface, EntityLabel label, std::set<std::string> docs, double score = 1.0) {
    Entity e;
    e.key = {std::move(surface), label};
    e.display = e.key.surface;
    e.doc_ids = std::move(docs);
    e.score = score;
    return e;
}

Document doc(std::string id, SourceKind source = SourceKind::articles) {
    Document d;
    d.id = id;
    d.source = source;
    d.title = "title " + id;
    d.url = "https://example.org/" + id;
    return d;
}

RankedEntities ranked(std::vector<Entity> entries) {
    RankedEntities r;
    r.entries = std::move(entries);
    return r;
}

// {Acme:{d1,d2}, Jane:{d1}, London:{d2}}
ConnectionGraph three_entity_graph() {
    const std::vector<Document> docs{doc("d1"), doc("d2", SourceKind::companies)};
    return build_graph(ranked({entity("acme", EntityLabel::ORG, {"d1", "d2"}, 3.0),
                               entity("jane", EntityLabel::PER, {"d1"}, 2.0),
                               entity("london", EntityLabel::LOC, {"d2"}, 1.0)}),
                       docs, "acme");
}

const EntityKey kAcme{"acme", EntityLabel::ORG};
const EntityKey kJane{"jane", EntityLabel::PER};
const EntityKey kLondon{"london", EntityLabel::LOC};

} // namespace

TEST(Graph, ThreeEntityFixture) {
    const auto g = three_entity_graph();
    EXPECT_EQ(g.nodes.size(), 3u);
    ASSERT_EQ(g.edges.size(), 2u);
    const auto& aj = g.edges.at(make_edge_key(kAcme, kJane));
    EXPECT_EQ(aj.weight(), 1u);
    EXPECT_EQ(aj.evidence.at(0).doc_id, "d1");
    EXPECT_EQ(aj.relation_hint(), "news story");
    const auto& al = g.edges.at(make_edge_key(kLondon, kAcme));
    EXPECT_EQ(al.evidence.at(0).doc_id, "d2");
    EXPECT_EQ(al.relation_hint(), "companies-house record");
    EXPECT_FALSE(g.edges.count(make_edge_key(kJane, kLondon)));
    EXPECT_EQ(g.nodes.at(kAcme).origin_queries, (std::set<std::string>{"acme"}));
}

TEST(Graph, SingleEntityAndIdenticalDocSets) {
    const std::vector<Document> docs{doc("a"), doc("b"), doc("c")};
    const auto one = build_graph(ranked({entity("x", EntityLabel::PER, {"a"})}), docs, "q");
    EXPECT_EQ(one.nodes.size(), 1u);
    EXPECT_TRUE(one.edges.empty());
    const auto two = build_graph(
        ranked({entity("x", EntityLabel::PER, {"a", "b", "c"}), entity("y", EntityLabel::ORG, {"a", "b", "c"})}), docs, "q");
    ASSERT_EQ(two.edges.size(), 1u);
    EXPECT_EQ(two.edges.begin()->second.weight(), 3u);
}

TEST(Graph, DanglingDocumentRejected) {
    const std::vector<Document> docs{doc("a")};
    EXPECT_THROW(build_graph(ranked({entity("x", EntityLabel::PER, {"zz"})}), docs, "q"), Error);
}

TEST(Graph, MixedSourcesJoinHints) {
    const std::vector<Document> docs{doc("a", SourceKind::web), doc("b", SourceKind::articles),
                                     doc("c", SourceKind::web)};
    const auto g = build_graph(
        ranked({entity("x", EntityLabel::PER, {"a", "b", "c"}), entity("y", EntityLabel::ORG, {"a", "b", "c"})}), docs, "q");
    EXPECT_EQ(g.edges.begin()->second.relation_hint(), "news story, web result");
}

TEST(Graph, MergeRules) {
    const auto g = three_entity_graph();
    const auto same = merge(g, g);
    EXPECT_TRUE(same.same_structure(g));
    EXPECT_EQ(same.generation, g.generation + 1);
    const auto with_empty = merge(g, ConnectionGraph{});
    EXPECT_TRUE(with_empty.same_structure(g));

    const std::vector<Document> docs{doc("d1"), doc("d4", SourceKind::officers)};
    const auto g2 = build_graph(ranked({entity("acme", EntityLabel::ORG, {"d1", "d4"}, 9.0),
                                        entity("jane", EntityLabel::PER, {"d1", "d4"}, 1.0)}),
                                docs, "jane doe");
    auto renamed = g2;
    renamed.nodes.at(kAcme).display = "ACME";
    const auto merged = merge(g, renamed);
    const auto& edge = merged.edges.at(make_edge_key(kAcme, kJane));
    EXPECT_EQ(edge.weight(), 2u);
    EXPECT_EQ(edge.evidence.at(1).doc_id, "d4");
    EXPECT_EQ(edge.relation_hint(), "news story, officer record");
    const auto& acme = merged.nodes.at(kAcme);
    EXPECT_EQ(acme.score, 9.0);
    EXPECT_EQ(acme.display, "acme");
    EXPECT_EQ(acme.doc_ids, (std::set<std::string>{"d1", "d2", "d4"}));
    EXPECT_EQ(acme.origin_queries, (std::set<std::string>{"acme", "jane doe"}));
}

TEST(Graph, Neighbors) {
    const auto g = three_entity_graph();
    const auto n = neighbors(g, kAcme);
    ASSERT_EQ(n.size(), 2u);
    EXPECT_EQ(n[0].first.key, kJane);
    EXPECT_EQ(n[1].first.key, kLondon);
    EXPECT_EQ(neighbors(g, kJane).size(), 1u);
    EXPECT_THROW(neighbors(g, EntityKey{"nobody", EntityLabel::PER}), Error);
    const std::vector<Document> docs{doc("a")};
    const auto lone = build_graph(ranked({entity("x", EntityLabel::PER, {"a"})}), docs, "q");
    EXPECT_TRUE(neighbors(lone, EntityKey{"x", EntityLabel::PER}).empty());
}

TEST(Graph, ExportShapeAndRoundTrip) {
    EXPECT_EQ(export_graph(ConnectionGraph{}).dump(), R"({"nodes":[],"links":[]})");
    const auto g = three_entity_graph();
    const auto j = export_graph(g);
    EXPECT_EQ(j["nodes"].size(), 3u);
    EXPECT_EQ(j["links"].size(), 2u);
    EXPECT_EQ(j["links"][0]["evidence"][0].size(), 4u);
    EXPECT_EQ(j["nodes"][0]["id"], "ORG:acme");
    EXPECT_EQ(j.dump(), export_graph(g).dump());
    const auto back = import_graph(j);
    EXPECT_TRUE(back.same_structure(g));
    EXPECT_EQ(export_graph(back).dump(), j.dump());
    EXPECT_THROW(import_graph(json::parse(R"({"nodes":[{"id":"bad"}],"links":[]})")), Error);
}

TEST(Graph, PropertyMatchesBruteForceCoOccurrence) {
    std::mt19937_64 rng(44);
    for (int round = 0; round < 100; ++round) {
        std::vector<Document> docs;
        const auto n_docs = 1 + rng() % 30;
        for (std::size_t i = 0; i < n_docs; ++i) docs.push_back(doc("d" + std::to_string(i), static_cast<SourceKind>(i % 5)));
        std::vector<Entity> entities;
        std::vector<std::pair<std::string, std::set<std::string>>> raw;
        for (int e = 0; e < 10; ++e) {
            std::set<std::string> ids;
            for (const auto& d : docs) {
                if (rng() % 4 == 0) ids.insert(d.id);
            }
            if (ids.empty()) ids.insert(docs[rng() % docs.size()].id);
            entities.push_back(entity("e" + std::to_string(e), EntityLabel::ORG, ids));
            raw.emplace_back(entities.back().key.id(), ids);
        }
        const auto g = build_graph(ranked(entities), docs, "q");
        const auto expected = oracle::co_occurrence(raw);
        ASSERT_EQ(g.edges.size(), expected.size());
        for (const auto& [key, edge] : g.edges) {
            auto a = key.first.id(), b = key.second.id();
            if (b < a) std::swap(a, b);
            const auto& docs_expected = expected.at({a, b});
            std::set<std::string> got;
            for (const auto& ev : edge.evidence) got.insert(ev.doc_id);
            EXPECT_EQ(got, docs_expected);
            EXPECT_EQ(edge.weight(), docs_expected.size());
            EXPECT_NE(edge.first, edge.second);
        }
    }
}
