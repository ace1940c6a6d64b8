#include "dminr/pipeline.hpp"

#include "parallel.hpp"

#include <mutex>

namespace dminr {

namespace {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
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

} // namespace

EntityPipeline::EntityPipeline(PipelineConfig config) : config_(std::move(config)) {
    config_.bm25.validate();
    if (config_.gazetteer) gazetteer_ = load_gazetteer(*config_.gazetteer);
    if (config_.extractor) extractor_ = connect_extractor(*config_.extractor);
}

std::vector<BioTag> EntityPipeline::label(const Document& doc, std::span<const Token> tokens,
                                          std::vector<std::string>& failures) const {
    if (!extractor_) return label_tokens(doc, tokens, gazetteer_);
    auto result = external_extract(doc, tokens, *extractor_, gazetteer_, config_.extractor->fallback);
    if (result.fell_back) failures.push_back(doc.id + ": " + result.failure);
    return std::move(result.tags);
}

PipelineResult EntityPipeline::run(std::span<const Document> corpus, const std::string& query) const {
    PipelineResult out;
    const unsigned workers = std::max(1u, config_.workers);

    const auto tokens = stage("index", [&] { return tokenize_all(corpus, workers); });
    out.index = stage("index", [&] { return build_index_from_tokens(corpus, tokens, workers); });

    stage("extract", [&] {
        std::vector<std::vector<EntityMention>> per_doc(corpus.size());
        std::vector<std::vector<std::string>> failures(corpus.size());
        detail::parallel_for(corpus.size(), workers, [&](std::size_t i) {
            const auto tags = label(corpus[i], tokens[i], failures[i]);
            per_doc[i] = decode_mentions(tags, tokens[i], corpus[i]);
        });
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            out.mentions.insert(out.mentions.end(), per_doc[i].begin(), per_doc[i].end());
            out.extractor_failures.insert(out.extractor_failures.end(), failures[i].begin(),
                                          failures[i].end());
        }
        out.entities = canonicalize(out.mentions);
        return 0;
    });

    out.ranked = stage("rank", [&] {
        return rank_entities(out.entities, out.index, config_.bm25, config_.top_k, config_.aggregation);
    });
    out.graph = stage("graph", [&] { return build_graph(out.ranked, corpus, query); });
    return out;
}

json ranked_entities_to_json(const RankedEntities& ranked) {
    json out = json::array();
    for (const auto& e : ranked.entries) out.push_back(entity_to_json(e));
    return out;
}

} // namespace dminr
