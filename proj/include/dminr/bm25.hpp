#pragma once

#include "dminr/inverted_index.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dminr {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;

    // Throws Error(invalid_argument) unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double bm25_idf(std::uint32_t df, std::size_t n) noexcept;

// BM25 contribution of one term to one document. 0 when the term is absent.
// Throws Error(invalid_argument) on an empty index, Error(not_found) on an unknown doc id.
double bm25_term(std::string_view term, std::string_view doc_id, const InvertedIndex& index,
                 const Bm25Params& params = {});

// Same, addressing the document by ordinal (no lookup).
double bm25_term_at(std::string_view term, std::uint32_t ordinal, const InvertedIndex& index,
                    const Bm25Params& params = {});

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

// Sum of bm25_term over `terms`; top k by score descending, ties by doc id
// ascending, zero scores dropped.
std::vector<ScoredDoc> bm25_query(std::span<const std::string> terms, const InvertedIndex& index,
                                  const Bm25Params& params, std::size_t k);

} // namespace dminr
