#pragma once

#include "dminr/document.hpp"
#include "dminr/entity.hpp"
#include "dminr/rank.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dminr {

// A document that shows two entities together, with enough provenance for a
// journalist to check it.
struct Evidence {
    std::string doc_id;
    SourceKind source = SourceKind::fixture;
    std::string url;
    std::string title;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct GraphNode {
    EntityKey key;
    std::string display;
    double score = 0.0;
    std::set<std::string> doc_ids;
    std::set<std::string> origin_queries;

    EntityLabel label() const { return key.label; }

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

using EdgeKey = std::pair<EntityKey, EntityKey>; // first < second

struct GraphEdge {
    EntityKey first;
    EntityKey second;
    std::vector<Evidence> evidence; // sorted by doc id, one entry per document

    std::size_t weight() const noexcept { return evidence.size(); }

    // Kind of record linking the two entities ("news story",
    // "companies-house record", ...); several kinds are joined with ", ".
    std::string relation_hint() const;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

std::string_view source_hint(SourceKind source) noexcept;

EdgeKey make_edge_key(const EntityKey& a, const EntityKey& b);

struct ConnectionGraph {
    std::map<EntityKey, GraphNode> nodes;
    std::map<EdgeKey, GraphEdge> edges;
    std::uint64_t generation = 0;

    bool empty() const noexcept { return nodes.empty(); }

    // Node and edge sets equal; the generation counter is ignored.
    bool same_structure(const ConnectionGraph& other) const {
        return nodes == other.nodes && edges == other.edges;
    }
};

// One node per ranked entity, one edge per pair sharing a document.
// Throws Error(not_found) when an entity names a document not in `docs`.
ConnectionGraph build_graph(const RankedEntities& ranked, std::span<const Document> docs,
                            const std::string& query);

// Union of nodes and edges. Node doc ids and queries are unioned, the score is
// the max, the display comes from `base`; evidence is unioned by doc id.
// The result's generation is base.generation + 1.
ConnectionGraph merge(const ConnectionGraph& base, const ConnectionGraph& delta);

// Adjacent nodes with their edges, by weight descending then key ascending.
// Throws Error(not_found) for an unknown key.
std::vector<std::pair<GraphNode, GraphEdge>> neighbors(const ConnectionGraph& graph,
                                                       const EntityKey& key);

// Node-link JSON consumed by the exploration UI:
// {"nodes":[{"id","display","label","score","docs","queries"}],
//  "links":[{"source","target","weight","evidence":[{"doc","src","url","title"}],"hint"}]}
json export_graph(const ConnectionGraph& graph);

// Inverse of export_graph (generation starts at 0). Throws Error(parse).
ConnectionGraph import_graph(const json& node_link);

} // namespace dminr
