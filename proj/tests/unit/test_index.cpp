#include "dminr/corpus.hpp"
#include "dminr/error.hpp"
#include "dminr/inverted_index.hpp"
#include "dminr/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace dminr;

namespace {

std::vector<Document> three_docs() { return load_corpus(oracle::fixture_path("corpus/three_docs.jsonl")); }

} // namespace

TEST(InvertedIndex, ThreeDocumentPostings) {
    const auto index = build_index(three_docs());
    EXPECT_EQ(index.doc_count(), 3u);
    EXPECT_DOUBLE_EQ(index.avgdl(), 8.0 / 3.0);
    ASSERT_NE(index.postings("acme"), nullptr);
    const PostingList expected{{0, 1, {0}}, {1, 1, {0}}};
    EXPECT_EQ(*index.postings("acme"), expected);
    EXPECT_EQ(index.document_frequency("beta"), 2u);
    EXPECT_EQ(index.document_frequency("gamma"), 0u);
    EXPECT_EQ(index.postings("gamma"), nullptr);
    EXPECT_EQ(index.term_frequency("beta", *index.doc_ordinal("d1")), 1u);
}

TEST(InvertedIndex, DumpMatchesGoldenFile) {
    const auto dump = build_index(three_docs()).dump();
    std::ifstream in(oracle::fixture_path("corpus/three_docs_index.json"));
    ASSERT_TRUE(in) << "golden file missing";
    EXPECT_EQ(dump, json::parse(in));
}

TEST(InvertedIndex, EmptyCorpus) {
    const auto index = build_index(std::vector<Document>{});
    EXPECT_TRUE(index.empty());
    EXPECT_EQ(index.avgdl(), 0.0);
    EXPECT_TRUE(index.terms().empty());
}

TEST(InvertedIndex, EmptyBodyCountsAsZeroLengthDocument) {
    std::vector<Document> docs(2);
    docs[0].id = "a";
    docs[0].body = "one two";
    docs[1].id = "b";
    const auto index = build_index(docs);
    EXPECT_EQ(index.doc_count(), 2u);
    EXPECT_EQ(index.doc_lengths()[1], 0u);
    EXPECT_DOUBLE_EQ(index.avgdl(), 1.0);
}

TEST(InvertedIndex, DuplicateIdsRejected) {
    std::vector<Document> docs(2);
    docs[0].id = docs[1].id = "same";
    try {
        build_index(docs);
        FAIL() << "expected duplicate_id";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::duplicate_id);
    }
}

TEST(InvertedIndex, PropertyPostingsAgreeWithRawCounts) {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 100; ++round) {
        const auto docs = oracle::random_corpus(rng, 15, 25, 12);
        const auto index = build_index(docs, 1 + round % 4);
        std::size_t total = 0;
        for (const auto& d : docs) {
            const auto words = oracle::split_words(d.body);
            total += words.size();
            const auto ord = index.doc_ordinal(d.id);
            ASSERT_TRUE(ord);
            EXPECT_EQ(index.doc_lengths()[*ord], words.size());
            for (std::size_t pos = 0; pos < words.size(); ++pos) {
                const auto* list = index.postings(words[pos]);
                ASSERT_NE(list, nullptr);
                auto it = std::find_if(list->begin(), list->end(), [&](const Posting& p) { return p.doc == *ord; });
                ASSERT_NE(it, list->end());
                EXPECT_TRUE(std::count(it->positions.begin(), it->positions.end(), pos));
            }
        }
        for (const auto& [term, list] : index.terms()) {
            for (std::size_t i = 1; i < list.size(); ++i) EXPECT_LT(list[i - 1].doc, list[i].doc);
            for (const auto& p : list) {
                EXPECT_EQ(p.tf, p.positions.size());
                EXPECT_TRUE(std::is_sorted(p.positions.begin(), p.positions.end()));
            }
        }
        EXPECT_DOUBLE_EQ(index.avgdl(), static_cast<double>(total) / docs.size());
    }
}

TEST(InvertedIndex, WorkerCountDoesNotChangeResult) {
    const auto docs = synthetic_corpus(600, 3);
    const auto reference = build_index(docs, 1);
    for (unsigned w : {2u, 3u, 4u, 8u, 16u}) {
        const auto index = build_index(docs, w);
        EXPECT_EQ(index, reference) << "workers=" << w;
        EXPECT_EQ(index.digest(), reference.digest());
    }
}

TEST(InvertedIndex, InputOrderDoesNotChangeResult) {
    auto docs = synthetic_corpus(200, 5);
    const auto reference = build_index(docs);
    std::mt19937_64 rng(1);
    std::shuffle(docs.begin(), docs.end(), rng);
    EXPECT_EQ(build_index(docs, 4), reference);
}

TEST(InvertedIndex, DigestSeesSmallChanges) {
    auto docs = three_docs();
    const auto before = build_index(docs).digest();
    docs[2].body = "beta fail";
    EXPECT_NE(build_index(docs).digest(), before);
    EXPECT_EQ(digest_hex(0x1234), "0000000000001234");
}

TEST(Synth, SeededAndReproducible) {
    const auto a = synthetic_corpus(50, 42);
    EXPECT_EQ(a, synthetic_corpus(50, 42));
    EXPECT_NE(a, synthetic_corpus(50, 43));
    EXPECT_EQ(a.front().id, "synth-000000");
    for (const auto& d : a) {
        const auto n = tokenize(d.body).size();
        EXPECT_GE(n, 40u);
        EXPECT_LE(n, 240u);
    }
}
