#include "dminr/bm25.hpp"

#include "dminr/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dminr {

void Bm25Params::validate() const {
    if (!(k1 >= 0.0) || !(b >= 0.0 && b <= 1.0)) {
        throw Error(Errc::invalid_argument, "BM25 parameters require k1 >= 0 and b in [0, 1]");
    }
}

double bm25_idf(std::uint32_t df, std::size_t n) noexcept {
    const double N = static_cast<double>(n);
    const double d = static_cast<double>(df);
    return std::log(1.0 + (N - d + 0.5) / (d + 0.5));
}

namespace {

double term_score(std::uint32_t tf, std::uint32_t df, std::uint32_t dl, const InvertedIndex& index,
                  const Bm25Params& params) {
    if (tf == 0) return 0.0;
    const double norm = index.avgdl() > 0.0 ? static_cast<double>(dl) / index.avgdl() : 0.0;
    const double t = static_cast<double>(tf);
    const double saturation = t * (params.k1 + 1.0) / (t + params.k1 * (1.0 - params.b + params.b * norm));
    return bm25_idf(df, index.doc_count()) * saturation;
}

} // namespace

double bm25_term_at(std::string_view term, std::uint32_t ordinal, const InvertedIndex& index,
                    const Bm25Params& params) {
    if (index.empty()) throw Error(Errc::invalid_argument, "BM25 on an empty index");
    if (ordinal >= index.doc_count()) throw Error(Errc::not_found, "document ordinal out of range");
    return term_score(index.term_frequency(term, ordinal), index.document_frequency(term),
                      index.doc_lengths()[ordinal], index, params);
}

double bm25_term(std::string_view term, std::string_view doc_id, const InvertedIndex& index,
                 const Bm25Params& params) {
    if (index.empty()) throw Error(Errc::invalid_argument, "BM25 on an empty index");
    auto ord = index.doc_ordinal(doc_id);
    if (!ord) throw Error(Errc::not_found, "unknown document '" + std::string(doc_id) + "'");
    return bm25_term_at(term, *ord, index, params);
}

std::vector<ScoredDoc> bm25_query(std::span<const std::string> terms, const InvertedIndex& index,
                                  const Bm25Params& params, std::size_t k) {
    if (k == 0) throw Error(Errc::invalid_argument, "k must be positive");
    if (terms.empty() || index.empty()) return {};

    std::map<std::uint32_t, std::vector<double>> parts;
    for (const auto& term : terms) {
        const auto* list = index.postings(term);
        if (!list) continue;
        const auto df = static_cast<std::uint32_t>(list->size());
        for (const auto& p : *list) {
            parts[p.doc].push_back(term_score(p.tf, df, index.doc_lengths()[p.doc], index, params));
        }
    }

    // Summing in sorted order makes equal contributions give bit-identical
    // totals, so exact ties fall through to the doc id.
    std::vector<ScoredDoc> ranked;
    ranked.reserve(parts.size());
    for (auto& [ord, contributions] : parts) {
        std::sort(contributions.begin(), contributions.end());
        double score = 0.0;
        for (double c : contributions) score += c;
        if (score > 0.0) ranked.push_back({index.doc_ids()[ord], score});
    }
    std::sort(ranked.begin(), ranked.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

} // namespace dminr
