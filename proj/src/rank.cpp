#include "dminr/rank.hpp"

#include "dminr/error.hpp"

#include <algorithm>

namespace dminr {

double score_entity(const Entity& entity, const InvertedIndex& index, const Bm25Params& params,
                    EntityAggregation aggregation) {
    if (index.empty()) throw Error(Errc::invalid_argument, "cannot score entities on an empty index");
    if (aggregation == EntityAggregation::mention_count) {
        return static_cast<double>(entity.mentions.size());
    }
    const auto terms = token_texts(entity.key.surface);
    double total = 0.0;
    for (const auto& doc_id : entity.doc_ids) {
        auto ord = index.doc_ordinal(doc_id);
        if (!ord) throw Error(Errc::not_found, "entity document '" + doc_id + "' is not indexed");
        double doc_score = 0.0;
        for (const auto& term : terms) doc_score += bm25_term_at(term, *ord, index, params);
        if (aggregation == EntityAggregation::max_over_docs) {
            total = std::max(total, doc_score);
        } else {
            total += doc_score;
        }
    }
    return total;
}

RankedEntities rank_entities(std::span<const Entity> entities, const InvertedIndex& index,
                             const Bm25Params& params, std::size_t k, EntityAggregation aggregation) {
    if (k == 0) throw Error(Errc::invalid_argument, "k must be positive");
    RankedEntities ranked;
    ranked.k = k;
    if (entities.empty()) return ranked;
    for (const auto& e : entities) {
        const double score = score_entity(e, index, params, aggregation);
        if (score <= 0.0) continue;
        Entity copy = e;
        copy.score = score;
        ranked.entries.push_back(std::move(copy));
    }
    std::sort(ranked.entries.begin(), ranked.entries.end(), [](const Entity& a, const Entity& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.key < b.key;
    });
    if (ranked.entries.size() > k) ranked.entries.resize(k);
    return ranked;
}

} // namespace dminr
