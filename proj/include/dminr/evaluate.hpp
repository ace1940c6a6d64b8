#pragma once

#include "dminr/corpus.hpp"
#include "dminr/entity.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace dminr {

struct SpanCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    // tp / (tp + fp), 1.0 when nothing was predicted.
    double precision() const;
    // tp / (tp + fn), 1.0 when there was nothing to find.
    double recall() const;
    // Harmonic mean, 0.0 when precision + recall == 0.
    double f1() const;
};

struct ExtractorEval {
    SpanCounts overall;
    std::map<EntityLabel, SpanCounts> per_label;

    double precision() const { return overall.precision(); }
    double recall() const { return overall.recall(); }
    double f1() const { return overall.f1(); }
};

json eval_to_json(const ExtractorEval& eval);

// Exact-span, exact-label scoring. predicted[i] holds the mentions found in
// gold[i]; every mention in one list must come from the same document.
// Throws Error(invalid_argument) when the lists are misaligned.
ExtractorEval evaluate(std::span<const AnnotatedDocument> gold,
                       std::span<const std::vector<EntityMention>> predicted);

} // namespace dminr
