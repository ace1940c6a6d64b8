#include "dminr/synth.hpp"

#include <cstdio>
#include <random>
#include <string>

namespace dminr {

namespace {

std::vector<std::string> make_vocabulary(std::size_t size) {
    static const char* syllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "te", "vo", "zi", "pa",
                                      "do", "fe", "gu", "ha", "ji", "bo", "ce", "xu", "wy", "qo"};
    constexpr std::size_t n = std::size(syllables);
    std::vector<std::string> words;
    words.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::string w;
        std::size_t v = i;
        do {
            w += syllables[v % n];
            v /= n;
        } while (v > 0);
        w += syllables[(i * 7) % n];
        words.push_back(std::move(w));
    }
    return words;
}

} // namespace

std::vector<Document> synthetic_corpus(std::size_t docs, std::uint64_t seed, std::size_t min_tokens,
                                       std::size_t max_tokens) {
    static const auto vocab = make_vocabulary(5000);
    std::mt19937_64 rng(seed);
    std::vector<Document> out;
    out.reserve(docs);
    const std::uint64_t span = max_tokens >= min_tokens ? max_tokens - min_tokens + 1 : 1;
    for (std::size_t d = 0; d < docs; ++d) {
        char id[32];
        std::snprintf(id, sizeof id, "synth-%06zu", d);
        Document doc;
        doc.id = id;
        doc.source = SourceKind::fixture;
        doc.title = "Synthetic document " + std::to_string(d);
        const std::size_t length = min_tokens + static_cast<std::size_t>(rng() % span);
        for (std::size_t t = 0; t < length; ++t) {
            // Product of two uniform draws skews towards frequent (low) ranks.
            const std::uint64_t a = rng() % vocab.size();
            const std::uint64_t b = rng() % vocab.size();
            const std::size_t rank = static_cast<std::size_t>(a * b / vocab.size());
            if (t > 0) doc.body += (rng() % 12 == 0) ? ". " : " ";
            doc.body += vocab[rank];
        }
        out.push_back(std::move(doc));
    }
    return out;
}

} // namespace dminr
