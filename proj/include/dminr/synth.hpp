#pragma once

#include "dminr/document.hpp"

#include <cstdint>
#include <vector>

namespace dminr {

inline constexpr std::uint64_t kDefaultSynthSeed = 20210604;

// Reproducible synthetic corpus for benchmarks and property tests. Uses the raw
// output of std::mt19937_64 (fully specified by the standard) with integer
// arithmetic, so the same seed gives the same corpus on every platform.
// Ids are "synth-000000", ...; bodies draw from a skewed 5000-word vocabulary.
std::vector<Document> synthetic_corpus(std::size_t docs, std::uint64_t seed = kDefaultSynthSeed,
                                       std::size_t min_tokens = 40, std::size_t max_tokens = 240);

} // namespace dminr
