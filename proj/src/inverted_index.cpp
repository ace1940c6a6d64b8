#include "dminr/inverted_index.hpp"

#include "dminr/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace dminr {

namespace {

struct TermOccurrences {
    std::string term;
    std::vector<std::uint32_t> positions;
};

std::vector<TermOccurrences> group_terms(const std::vector<Token>& tokens) {
    std::unordered_map<std::string_view, std::size_t> slot;
    std::vector<TermOccurrences> grouped;
    for (const auto& tok : tokens) {
        auto [it, inserted] = slot.try_emplace(tok.text, grouped.size());
        if (inserted) grouped.push_back({tok.text, {}});
        grouped[it->second].positions.push_back(static_cast<std::uint32_t>(tok.position));
    }
    return grouped;
}

class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
    }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void str(std::string_view s) {
        u64(s.size());
        bytes(s.data(), s.size());
    }
    std::uint64_t value() const { return state_; }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

} // namespace

std::optional<std::uint32_t> InvertedIndex::doc_ordinal(std::string_view doc_id) const {
    auto it = std::lower_bound(doc_ids_.begin(), doc_ids_.end(), doc_id);
    if (it == doc_ids_.end() || *it != doc_id) return std::nullopt;
    return static_cast<std::uint32_t>(it - doc_ids_.begin());
}

const PostingList* InvertedIndex::postings(std::string_view term) const {
    auto it = terms_.find(term);
    return it == terms_.end() ? nullptr : &it->second;
}

std::uint32_t InvertedIndex::document_frequency(std::string_view term) const {
    const auto* list = postings(term);
    return list ? static_cast<std::uint32_t>(list->size()) : 0;
}

std::uint32_t InvertedIndex::term_frequency(std::string_view term, std::uint32_t ordinal) const {
    const auto* list = postings(term);
    if (!list) return 0;
    auto it = std::lower_bound(list->begin(), list->end(), ordinal,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    return (it != list->end() && it->doc == ordinal) ? it->tf : 0;
}

json InvertedIndex::dump() const {
    json out;
    out["n"] = doc_count();
    out["avgdl"] = avgdl_;
    json lengths = json::object();
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) lengths[doc_ids_[i]] = doc_lengths_[i];
    out["doc_lengths"] = std::move(lengths);
    json postings = json::object();
    for (const auto& [term, list] : terms_) {
        json entries = json::array();
        for (const auto& p : list) {
            entries.push_back({{"doc", doc_ids_[p.doc]}, {"tf", p.tf}, {"positions", p.positions}});
        }
        postings[term] = std::move(entries);
    }
    out["postings"] = std::move(postings);
    return out;
}

std::uint64_t InvertedIndex::digest() const {
    Fnv1a h;
    h.u64(doc_ids_.size());
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        h.str(doc_ids_[i]);
        h.u64(doc_lengths_[i]);
    }
    h.u64(terms_.size());
    for (const auto& [term, list] : terms_) {
        h.str(term);
        h.u64(list.size());
        for (const auto& p : list) {
            h.u64(p.doc);
            h.u64(p.tf);
            for (auto pos : p.positions) h.u64(pos);
        }
    }
    return h.value();
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::vector<std::vector<Token>> tokenize_all(std::span<const Document> docs, unsigned workers) {
    std::vector<std::vector<Token>> out(docs.size());
    detail::parallel_for(docs.size(), workers, [&](std::size_t i) { out[i] = tokenize(docs[i].body); });
    return out;
}

InvertedIndex build_index(std::span<const Document> docs, unsigned workers) {
    const auto tokens = tokenize_all(docs, workers);
    return build_index_from_tokens(docs, tokens, workers);
}

InvertedIndex build_index_from_tokens(std::span<const Document> docs,
                                      std::span<const std::vector<Token>> tokens,
                                      unsigned workers) {
    if (tokens.size() != docs.size()) {
        throw Error(Errc::length_mismatch, "token lists do not match documents");
    }
    workers = std::max(1u, workers);

    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return docs[a].id < docs[b].id; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (docs[order[i]].id == docs[order[i - 1]].id) {
            throw Error(Errc::duplicate_id, "duplicate document id '" + docs[order[i]].id + "'");
        }
    }

    InvertedIndex index;
    index.doc_ids_.reserve(docs.size());
    index.doc_lengths_.reserve(docs.size());
    std::uint64_t total = 0;
    for (auto i : order) {
        index.doc_ids_.push_back(docs[i].id);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens[i].size()));
        total += tokens[i].size();
    }
    index.avgdl_ = docs.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(docs.size());

    // Group each document's positions by term, in ordinal order.
    std::vector<std::vector<TermOccurrences>> grouped(docs.size());
    detail::parallel_for(docs.size(), workers,
                 [&](std::size_t ord) { grouped[ord] = group_terms(tokens[order[ord]]); });

    // Shard the merge by term hash. Each shard walks documents in ordinal order,
    // so every posting list comes out sorted regardless of the shard count.
    const unsigned shards = workers;
    std::vector<std::unordered_map<std::string, PostingList>> shard_maps(shards);
    const std::hash<std::string> hasher;
    detail::parallel_for(shards, workers, [&](std::size_t s) {
        auto& local = shard_maps[s];
        for (std::size_t ord = 0; ord < grouped.size(); ++ord) {
            for (const auto& occ : grouped[ord]) {
                if (shards > 1 && hasher(occ.term) % shards != s) continue;
                local[occ.term].push_back(
                    {static_cast<std::uint32_t>(ord), static_cast<std::uint32_t>(occ.positions.size()),
                     occ.positions});
            }
        }
    });
    for (auto& local : shard_maps) {
        for (auto& [term, list] : local) index.terms_.emplace(term, std::move(list));
    }
    return index;
}

} // namespace dminr
