#include "dminr/evaluate.hpp"

#include "dminr/error.hpp"

#include <set>
#include <tuple>

namespace dminr {

double SpanCounts::precision() const {
    return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double SpanCounts::recall() const {
    return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double SpanCounts::f1() const {
    const double p = precision();
    const double r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

namespace {

json counts_to_json(const SpanCounts& c) {
    return {{"tp", c.tp},         {"fp", c.fp},           {"fn", c.fn},
            {"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()}};
}

using SpanKey = std::tuple<std::size_t, std::size_t, EntityLabel>;

} // namespace

json eval_to_json(const ExtractorEval& eval) {
    json out = counts_to_json(eval.overall);
    json per = json::object();
    for (const auto& [label, counts] : eval.per_label) per[std::string(label_name(label))] = counts_to_json(counts);
    out["per_label"] = std::move(per);
    return out;
}

ExtractorEval evaluate(std::span<const AnnotatedDocument> gold,
                       std::span<const std::vector<EntityMention>> predicted) {
    if (gold.size() != predicted.size()) {
        throw Error(Errc::invalid_argument, "gold has " + std::to_string(gold.size()) +
                                                " documents but predictions cover " +
                                                std::to_string(predicted.size()));
    }
    ExtractorEval eval;
    for (auto l : kAllLabels) eval.per_label[l];

    for (std::size_t i = 0; i < gold.size(); ++i) {
        std::set<SpanKey> expected;
        for (const auto& s : gold[i].labels) expected.emplace(s.start, s.end, s.label);
        std::set<SpanKey> found;
        for (const auto& m : predicted[i]) {
            if (m.doc_id != predicted[i].front().doc_id) {
                throw Error(Errc::invalid_argument, "predictions for gold document " +
                                                        std::to_string(i) + " span several documents");
            }
            found.emplace(m.char_start, m.char_end, m.label);
        }
        for (const auto& s : found) {
            auto& per = eval.per_label[std::get<2>(s)];
            if (expected.contains(s)) {
                ++eval.overall.tp;
                ++per.tp;
            } else {
                ++eval.overall.fp;
                ++per.fp;
            }
        }
        for (const auto& s : expected) {
            if (!found.contains(s)) {
                ++eval.overall.fn;
                ++eval.per_label[std::get<2>(s)].fn;
            }
        }
    }
    return eval;
}

} // namespace dminr
