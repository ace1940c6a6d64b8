#pragma once

#include "dminr/document.hpp"
#include "dminr/tokenizer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dminr {

// One document's occurrences of a term. `doc` is the document's ordinal in
// InvertedIndex::doc_ids(), which is sorted, so posting lists are in doc-id order.
struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;
    std::vector<std::uint32_t> positions;

    friend bool operator==(const Posting&, const Posting&) = default;
};

using PostingList = std::vector<Posting>;

// Per-session term -> postings map with the corpus statistics BM25 needs.
// Immutable once built; safe to share across threads.
class InvertedIndex {
public:
    using TermMap = std::map<std::string, PostingList, std::less<>>;

    std::size_t doc_count() const noexcept { return doc_ids_.size(); }
    bool empty() const noexcept { return doc_ids_.empty(); }
    double avgdl() const noexcept { return avgdl_; }

    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_lengths_; }
    const TermMap& terms() const noexcept { return terms_; }

    std::optional<std::uint32_t> doc_ordinal(std::string_view doc_id) const;
    const PostingList* postings(std::string_view term) const;
    std::uint32_t document_frequency(std::string_view term) const;
    std::uint32_t term_frequency(std::string_view term, std::uint32_t ordinal) const;

    // {"n", "avgdl", "doc_lengths", "postings"} with terms and doc ids sorted.
    json dump() const;

    // FNV-1a over the full structure; equal indexes have equal digests.
    std::uint64_t digest() const;

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    friend InvertedIndex build_index_from_tokens(std::span<const Document>,
                                                 std::span<const std::vector<Token>>, unsigned);

    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    double avgdl_ = 0.0;
    TermMap terms_;
};

// Tokenizes every document body on `workers` threads; output order follows `docs`.
std::vector<std::vector<Token>> tokenize_all(std::span<const Document> docs, unsigned workers);

// Builds the index over document bodies. The result does not depend on `workers`.
// Throws Error(duplicate_id) when two documents share an id.
InvertedIndex build_index(std::span<const Document> docs, unsigned workers = 1);

// Same, from pre-tokenized bodies (tokens[i] belongs to docs[i]).
InvertedIndex build_index_from_tokens(std::span<const Document> docs,
                                      std::span<const std::vector<Token>> tokens,
                                      unsigned workers = 1);

std::string digest_hex(std::uint64_t digest);

} // namespace dminr
