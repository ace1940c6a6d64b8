#pragma once

#include "dminr/bm25.hpp"
#include "dminr/entity.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dminr {

// How per-document surface scores combine into one entity score.
enum class EntityAggregation {
    sum_over_docs, // default
    max_over_docs,
    mention_count,
};

inline constexpr std::size_t kDefaultTopEntities = 15;

// Sum over the entity's documents of the BM25 sum of its surface tokens.
// Throws Error(invalid_argument) on an empty index and Error(not_found) when a
// document of the entity is missing from the index.
double score_entity(const Entity& entity, const InvertedIndex& index, const Bm25Params& params = {},
                    EntityAggregation aggregation = EntityAggregation::sum_over_docs);

struct RankedEntities {
    std::vector<Entity> entries; // score populated; descending score, then key
    std::size_t k = kDefaultTopEntities;
};

// Scores every entity, drops zero scores, sorts and keeps the top k.
RankedEntities rank_entities(std::span<const Entity> entities, const InvertedIndex& index,
                             const Bm25Params& params = {}, std::size_t k = kDefaultTopEntities,
                             EntityAggregation aggregation = EntityAggregation::sum_over_docs);

} // namespace dminr
