#pragma once

#include "dminr/config.hpp"
#include "dminr/entity.hpp"
#include "dminr/error.hpp"
#include "dminr/external_extractor.hpp"
#include "dminr/graph.hpp"
#include "dminr/inverted_index.hpp"
#include "dminr/rank.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dminr {

// An Error raised inside one named pipeline stage ("search", "dedup",
// "index", "extract", "rank", "graph").
class StageError : public Error {
public:
    StageError(std::string stage, Errc code, const std::string& message)
        : Error(code, message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

struct PipelineResult {
    InvertedIndex index;
    std::vector<EntityMention> mentions;
    std::vector<Entity> entities;
    RankedEntities ranked;
    ConnectionGraph graph;
    std::vector<std::string> extractor_failures; // documents that fell back to the baseline
};

// index -> extract -> canonicalize -> rank -> graph over one corpus.
class EntityPipeline {
public:
    // Loads the gazetteer and connects the external extractor when configured.
    explicit EntityPipeline(PipelineConfig config);

    PipelineResult run(std::span<const Document> corpus, const std::string& query) const;

    const PipelineConfig& config() const noexcept { return config_; }
    const Gazetteer& gazetteer() const noexcept { return gazetteer_; }

private:
    std::vector<BioTag> label(const Document& doc, std::span<const Token> tokens,
                              std::vector<std::string>& failures) const;

    PipelineConfig config_;
    Gazetteer gazetteer_;
    std::unique_ptr<ExternalExtractor> extractor_;
};

json ranked_entities_to_json(const RankedEntities& ranked);

} // namespace dminr
