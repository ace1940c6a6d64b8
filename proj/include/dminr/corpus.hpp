#pragma once

#include "dminr/document.hpp"
#include "dminr/labels.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace dminr {

// Reads a JSONL corpus. Blank lines are skipped; errors name the 1-based line.
// Throws Error(io) for a missing file, Error(parse) for a malformed record and
// Error(duplicate_id) for a repeated id.
std::vector<Document> load_corpus(const std::filesystem::path& path);
std::vector<Document> parse_corpus(std::istream& in, const std::string& origin = "<stream>");

void write_corpus(std::span<const Document> docs, std::ostream& out);

// ---- near-duplicate detection ----------------------------------------------

struct DedupOptions {
    std::size_t shingle_k = 5;
    double threshold = 0.8;
};

struct DroppedDocument {
    std::string id;
    std::string kept_id;
    double jaccard = 0.0;

    friend bool operator==(const DroppedDocument&, const DroppedDocument&) = default;
};

struct DedupReport {
    std::vector<std::string> kept;
    std::vector<DroppedDocument> dropped;

    friend bool operator==(const DedupReport&, const DedupReport&) = default;
};

json dedup_report_to_json(const DedupReport& report);

// Sorted, de-duplicated k-token shingles of a document body.
struct ShingleSet {
    std::vector<std::string> tokens;
    std::vector<std::string> shingles; // empty when tokens.size() < k
};

ShingleSet make_shingles(const Document& doc, std::size_t k);

// Jaccard similarity of two shingle sets. Documents shorter than k tokens
// compare by exact token-sequence equality (1.0 or 0.0).
double shingle_jaccard(const ShingleSet& a, const ShingleSet& b, std::size_t k);

// Greedy pass in input order: a document is dropped when its similarity to
// some earlier kept document reaches the threshold. The dropped entry records
// the most similar kept document (earliest on ties).
DedupReport dedup(std::span<const Document> docs, const DedupOptions& options = {});

// Like dedup, with `existing` treated as already kept. The report covers the
// candidates only; candidates whose id already exists are dropped with jaccard 1.
DedupReport dedup_against(std::span<const Document> existing, std::span<const Document> candidates,
                          const DedupOptions& options = {});

// ---- annotation sets -------------------------------------------------------

struct AnnotationTopic {
    std::string name;
    std::string query;
};

// Topics used to assemble the labelling corpus: each name doubles as its query.
std::vector<AnnotationTopic> default_annotation_topics();

struct AnnotationSet {
    std::map<std::string, std::vector<Document>> buckets;
    std::vector<std::string> warnings;
};

// Case-insensitive all-terms match over title and body; at most per_topic_max
// documents per topic in corpus order. A bucket smaller than per_topic_min
// produces a shortfall warning.
AnnotationSet build_annotation_set(std::span<const Document> docs,
                                   std::span<const AnnotationTopic> topics,
                                   std::size_t per_topic_min = 50, std::size_t per_topic_max = 100);

struct LabelSpan {
    std::size_t start = 0; // code points
    std::size_t end = 0;   // exclusive
    EntityLabel label = EntityLabel::MISC;

    friend bool operator==(const LabelSpan&, const LabelSpan&) = default;
};

struct AnnotatedDocument {
    std::string text;
    std::vector<LabelSpan> labels;

    friend bool operator==(const AnnotatedDocument&, const AnnotatedDocument&) = default;
};

// Throws Error(invalid_argument) for empty, out-of-range or overlapping spans.
void validate_annotations(const AnnotatedDocument& doc);

json annotation_to_json(const AnnotatedDocument& doc);
AnnotatedDocument annotation_from_json(const json& record);

// One {"text", "labels": [[start, end, label], ...]} object per line.
void export_annotations(std::span<const AnnotatedDocument> docs, std::ostream& out);
void export_annotations(std::span<const AnnotatedDocument> docs, const std::filesystem::path& path);
std::vector<AnnotatedDocument> import_annotations(std::istream& in, const std::string& origin = "<stream>");
std::vector<AnnotatedDocument> import_annotations(const std::filesystem::path& path);

} // namespace dminr
