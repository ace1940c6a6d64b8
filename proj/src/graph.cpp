#include "dminr/graph.hpp"

#include "dminr/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace dminr {

std::string_view source_hint(SourceKind source) noexcept {
    switch (source) {
    case SourceKind::articles: return "news story";
    case SourceKind::companies: return "companies-house record";
    case SourceKind::officers: return "officer record";
    case SourceKind::web: return "web result";
    case SourceKind::fixture: return "document";
    }
    return "document";
}

std::string GraphEdge::relation_hint() const {
    std::set<SourceKind> kinds;
    for (const auto& e : evidence) kinds.insert(e.source);
    std::string hint;
    for (auto k : kinds) {
        if (!hint.empty()) hint += ", ";
        hint += source_hint(k);
    }
    return hint;
}

EdgeKey make_edge_key(const EntityKey& a, const EntityKey& b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

namespace {

Evidence evidence_for(const Document& doc) {
    return {doc.id, doc.source, doc.url, doc.title};
}

void add_evidence(GraphEdge& edge, const Evidence& ev) {
    auto it = std::lower_bound(edge.evidence.begin(), edge.evidence.end(), ev.doc_id,
                               [](const Evidence& e, const std::string& id) { return e.doc_id < id; });
    if (it != edge.evidence.end() && it->doc_id == ev.doc_id) return;
    edge.evidence.insert(it, ev);
}

} // namespace

ConnectionGraph build_graph(const RankedEntities& ranked, std::span<const Document> docs,
                            const std::string& query) {
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id.emplace(d.id, &d);

    ConnectionGraph graph;
    std::map<std::string, std::vector<EntityKey>> members; // doc id -> entity keys
    for (const auto& entity : ranked.entries) {
        GraphNode node;
        node.key = entity.key;
        node.display = entity.display;
        node.score = entity.score;
        node.doc_ids = entity.doc_ids;
        node.origin_queries.insert(query);
        for (const auto& id : entity.doc_ids) {
            if (!by_id.contains(id)) {
                throw Error(Errc::not_found, "entity '" + entity.key.id() + "' references unknown document '" + id + "'");
            }
            members[id].push_back(entity.key);
        }
        graph.nodes.insert_or_assign(entity.key, std::move(node));
    }

    for (auto& [doc_id, keys] : members) {
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        const Evidence ev = evidence_for(*by_id.at(doc_id));
        for (std::size_t i = 0; i < keys.size(); ++i) {
            for (std::size_t j = i + 1; j < keys.size(); ++j) {
                auto [it, inserted] = graph.edges.try_emplace(EdgeKey{keys[i], keys[j]});
                if (inserted) {
                    it->second.first = keys[i];
                    it->second.second = keys[j];
                }
                add_evidence(it->second, ev);
            }
        }
    }
    return graph;
}

ConnectionGraph merge(const ConnectionGraph& base, const ConnectionGraph& delta) {
    ConnectionGraph out = base;
    out.generation = base.generation + 1;
    for (const auto& [key, node] : delta.nodes) {
        auto [it, inserted] = out.nodes.try_emplace(key, node);
        if (inserted) continue;
        auto& mine = it->second;
        mine.score = std::max(mine.score, node.score);
        mine.doc_ids.insert(node.doc_ids.begin(), node.doc_ids.end());
        mine.origin_queries.insert(node.origin_queries.begin(), node.origin_queries.end());
    }
    for (const auto& [key, edge] : delta.edges) {
        auto [it, inserted] = out.edges.try_emplace(key, edge);
        if (inserted) continue;
        for (const auto& ev : edge.evidence) add_evidence(it->second, ev);
    }
    return out;
}

std::vector<std::pair<GraphNode, GraphEdge>> neighbors(const ConnectionGraph& graph,
                                                       const EntityKey& key) {
    if (!graph.nodes.contains(key)) throw Error(Errc::not_found, "unknown entity '" + key.id() + "'");
    std::vector<std::pair<GraphNode, GraphEdge>> out;
    for (const auto& [ek, edge] : graph.edges) {
        if (ek.first == key) {
            out.emplace_back(graph.nodes.at(ek.second), edge);
        } else if (ek.second == key) {
            out.emplace_back(graph.nodes.at(ek.first), edge);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second.weight() != b.second.weight()) return a.second.weight() > b.second.weight();
        return a.first.key < b.first.key;
    });
    return out;
}

json export_graph(const ConnectionGraph& graph) {
    json nodes = json::array();
    for (const auto& [key, node] : graph.nodes) {
        json n;
        n["id"] = key.id();
        n["display"] = node.display;
        n["label"] = label_name(key.label);
        n["score"] = node.score;
        n["docs"] = node.doc_ids;
        n["queries"] = node.origin_queries;
        nodes.push_back(std::move(n));
    }
    json links = json::array();
    for (const auto& [key, edge] : graph.edges) {
        json l;
        l["source"] = key.first.id();
        l["target"] = key.second.id();
        l["weight"] = edge.weight();
        json evidence = json::array();
        for (const auto& ev : edge.evidence) {
            evidence.push_back({{"doc", ev.doc_id}, {"src", source_name(ev.source)}, {"url", ev.url},
                                {"title", ev.title}});
        }
        l["evidence"] = std::move(evidence);
        l["hint"] = edge.relation_hint();
        links.push_back(std::move(l));
    }
    json out;
    out["nodes"] = std::move(nodes);
    out["links"] = std::move(links);
    return out;
}

namespace {

EntityKey key_from(const json& value) {
    if (!value.is_string()) throw Error(Errc::parse, "entity id must be a string");
    auto key = EntityKey::parse(value.get<std::string>());
    if (!key) throw Error(Errc::parse, "malformed entity id '" + value.get<std::string>() + "'");
    return *key;
}

} // namespace

ConnectionGraph import_graph(const json& node_link) {
    ConnectionGraph graph;
    try {
        for (const auto& n : node_link.at("nodes")) {
            GraphNode node;
            node.key = key_from(n.at("id"));
            if (parse_label(n.at("label").get<std::string>()) != node.key.label) {
                throw Error(Errc::parse, "label does not match id for '" + node.key.id() + "'");
            }
            node.display = n.at("display").get<std::string>();
            node.score = n.at("score").get<double>();
            for (const auto& d : n.at("docs")) node.doc_ids.insert(d.get<std::string>());
            for (const auto& q : n.at("queries")) node.origin_queries.insert(q.get<std::string>());
            graph.nodes.insert_or_assign(node.key, std::move(node));
        }
        for (const auto& l : node_link.at("links")) {
            const auto a = key_from(l.at("source"));
            const auto b = key_from(l.at("target"));
            if (a == b) throw Error(Errc::parse, "self-loop on '" + a.id() + "'");
            if (!graph.nodes.contains(a) || !graph.nodes.contains(b)) {
                throw Error(Errc::parse, "link endpoint missing from nodes");
            }
            GraphEdge edge;
            const auto ek = make_edge_key(a, b);
            edge.first = ek.first;
            edge.second = ek.second;
            for (const auto& e : l.at("evidence")) {
                auto src = parse_source(e.at("src").get<std::string>());
                if (!src) throw Error(Errc::parse, "unknown evidence source");
                add_evidence(edge, {e.at("doc").get<std::string>(), *src, e.at("url").get<std::string>(),
                                    e.at("title").get<std::string>()});
            }
            if (edge.evidence.empty()) throw Error(Errc::parse, "link without evidence");
            graph.edges.insert_or_assign(ek, std::move(edge));
        }
    } catch (const json::exception& e) {
        throw Error(Errc::parse, std::string("malformed node-link graph: ") + e.what());
    }
    return graph;
}

} // namespace dminr
