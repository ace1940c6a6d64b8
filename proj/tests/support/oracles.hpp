#pragma once

// Independent reference implementations used by the unit and acceptance tests.
// They work from raw whitespace-split token lists and nested loops, and share
// no code with the library beyond the plain data types.

#include "dminr/document.hpp"
#include "dminr/entity.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using dminr::Document;

inline std::vector<std::string> split_words(const std::string& body) {
    std::istringstream in(body);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

// Lower-case ASCII bodies, so split_words agrees with the tokenizer.
inline std::vector<Document> random_corpus(std::mt19937_64& rng, std::size_t max_docs, std::size_t max_tokens,
                                           std::size_t vocab, std::size_t min_docs = 1) {
    std::uniform_int_distribution<std::size_t> n_docs(min_docs, max_docs);
    std::uniform_int_distribution<std::size_t> n_tokens(0, max_tokens);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::vector<Document> docs(n_docs(rng));
    for (std::size_t i = 0; i < docs.size(); ++i) {
        docs[i].id = "doc" + std::to_string(1000 + i);
        docs[i].source = dminr::SourceKind::fixture;
        const auto len = n_tokens(rng);
        for (std::size_t t = 0; t < len; ++t) {
            if (t) docs[i].body += ' ';
            docs[i].body += "w" + std::to_string(word(rng));
        }
    }
    std::shuffle(docs.begin(), docs.end(), rng);
    return docs;
}

// Okapi BM25 written out in one expression from raw counts.
inline double bm25(const std::string& term, const std::string& doc_id, const std::vector<Document>& docs,
                   double k1 = 1.2, double b = 0.75) {
    const double n = static_cast<double>(docs.size());
    double total_len = 0.0;
    double df = 0.0;
    double tf = 0.0;
    double len = 0.0;
    for (const auto& d : docs) {
        const auto words = split_words(d.body);
        total_len += static_cast<double>(words.size());
        double count = 0.0;
        for (const auto& w : words) count += (w == term) ? 1.0 : 0.0;
        if (count > 0.0) df += 1.0;
        if (d.id == doc_id) {
            tf = count;
            len = static_cast<double>(words.size());
        }
    }
    const double avgdl = total_len / n;
    if (tf == 0.0) return 0.0;
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5)) * (tf * (k1 + 1.0)) /
           (tf + k1 * (1.0 - b + b * (avgdl > 0.0 ? len / avgdl : 0.0)));
}

// Every pair of entities that share a document, with the shared document ids.
inline std::map<std::pair<std::string, std::string>, std::set<std::string>>
co_occurrence(const std::vector<std::pair<std::string, std::set<std::string>>>& entity_docs) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> out;
    for (std::size_t i = 0; i < entity_docs.size(); ++i) {
        for (std::size_t j = 0; j < entity_docs.size(); ++j) {
            if (i == j || !(entity_docs[i].first < entity_docs[j].first)) continue;
            std::set<std::string> shared;
            for (const auto& d : entity_docs[i].second) {
                if (entity_docs[j].second.count(d)) shared.insert(d);
            }
            if (!shared.empty()) out[{entity_docs[i].first, entity_docs[j].first}] = shared;
        }
    }
    return out;
}

// Shingle Jaccard from whitespace tokens; short documents compare by equality.
inline double jaccard(const std::string& a, const std::string& b, std::size_t k) {
    const auto wa = split_words(a);
    const auto wb = split_words(b);
    if (wa.size() < k || wb.size() < k) return wa == wb ? 1.0 : 0.0;
    auto shingles = [k](const std::vector<std::string>& w) {
        std::set<std::vector<std::string>> s;
        for (std::size_t i = 0; i + k <= w.size(); ++i) s.insert({w.begin() + i, w.begin() + i + k});
        return s;
    };
    const auto sa = shingles(wa);
    const auto sb = shingles(wb);
    std::size_t inter = 0;
    for (const auto& s : sa) inter += sb.count(s);
    return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

inline std::string fixture_path(const std::string& relative) {
    return std::string(DMINR_FIXTURE_DIR) + "/" + relative;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("dminr-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace oracle
