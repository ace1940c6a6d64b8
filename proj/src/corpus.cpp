#include "dminr/corpus.hpp"

#include "dminr/error.hpp"
#include "dminr/tokenizer.hpp"
#include "dminr/unicode.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace dminr {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
    return in;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::string at_line(const std::string& origin, std::size_t line) {
    return origin + ":" + std::to_string(line) + ": ";
}

} // namespace

std::vector<Document> parse_corpus(std::istream& in, const std::string& origin) {
    std::vector<Document> docs;
    std::unordered_map<std::string, std::size_t> first_seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        Document doc;
        try {
            doc = document_from_json(json::parse(line));
        } catch (const json::exception& e) {
            throw Error(Errc::parse, at_line(origin, line_no) + "malformed record: " + e.what());
        } catch (const Error& e) {
            throw Error(Errc::parse, at_line(origin, line_no) + "malformed record: " + e.what());
        }
        auto [it, inserted] = first_seen.emplace(doc.id, line_no);
        if (!inserted) {
            throw Error(Errc::duplicate_id, at_line(origin, line_no) + "duplicate id '" + doc.id +
                                                "' (first seen on line " +
                                                std::to_string(it->second) + ")");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_corpus(in, path.string());
}

void write_corpus(std::span<const Document> docs, std::ostream& out) {
    for (const auto& d : docs) out << document_to_json(d).dump() << '\n';
}

// ---- dedup -----------------------------------------------------------------

json dedup_report_to_json(const DedupReport& report) {
    json dropped = json::array();
    for (const auto& d : report.dropped) {
        dropped.push_back({{"id", d.id}, {"kept_id", d.kept_id}, {"jaccard", d.jaccard}});
    }
    json out;
    out["kept"] = report.kept;
    out["dropped"] = std::move(dropped);
    out["counts"] = {{"input", report.kept.size() + report.dropped.size()},
                     {"kept", report.kept.size()},
                     {"dropped", report.dropped.size()}};
    return out;
}

ShingleSet make_shingles(const Document& doc, std::size_t k) {
    if (k == 0) throw Error(Errc::invalid_argument, "shingle size must be at least 1");
    ShingleSet set;
    set.tokens = token_texts(doc.body);
    if (set.tokens.size() < k) return set;
    set.shingles.reserve(set.tokens.size() - k + 1);
    for (std::size_t i = 0; i + k <= set.tokens.size(); ++i) {
        std::string s = set.tokens[i];
        for (std::size_t j = 1; j < k; ++j) {
            s.push_back(' ');
            s += set.tokens[i + j];
        }
        set.shingles.push_back(std::move(s));
    }
    std::sort(set.shingles.begin(), set.shingles.end());
    set.shingles.erase(std::unique(set.shingles.begin(), set.shingles.end()), set.shingles.end());
    return set;
}

double shingle_jaccard(const ShingleSet& a, const ShingleSet& b, std::size_t k) {
    const bool a_short = a.tokens.size() < k;
    const bool b_short = b.tokens.size() < k;
    if (a_short || b_short) return (a_short && b_short && a.tokens == b.tokens) ? 1.0 : 0.0;

    std::size_t common = 0;
    auto i = a.shingles.begin();
    auto j = b.shingles.begin();
    while (i != a.shingles.end() && j != b.shingles.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.shingles.size() + b.shingles.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

namespace {

void check_options(const DedupOptions& options) {
    if (options.shingle_k == 0) throw Error(Errc::invalid_argument, "shingle size must be at least 1");
    if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
        throw Error(Errc::invalid_argument, "dedup threshold must be in (0, 1]");
    }
}

struct KeptDoc {
    const std::string* id;
    ShingleSet shingles;
};

DedupReport greedy_pass(std::vector<KeptDoc> kept, std::span<const Document> candidates,
                        std::unordered_set<std::string> known_ids, const DedupOptions& options) {
    DedupReport report;
    for (const auto& doc : candidates) {
        if (known_ids.contains(doc.id)) {
            report.dropped.push_back({doc.id, doc.id, 1.0});
            continue;
        }
        auto shingles = make_shingles(doc, options.shingle_k);
        const std::string* best_id = nullptr;
        double best = -1.0;
        for (const auto& k : kept) {
            const double j = shingle_jaccard(shingles, k.shingles, options.shingle_k);
            if (j >= options.threshold && j > best) {
                best = j;
                best_id = k.id;
            }
        }
        if (best_id) {
            report.dropped.push_back({doc.id, *best_id, best});
        } else {
            report.kept.push_back(doc.id);
            known_ids.insert(doc.id);
            kept.push_back({&doc.id, std::move(shingles)});
        }
    }
    return report;
}

} // namespace

DedupReport dedup(std::span<const Document> docs, const DedupOptions& options) {
    return dedup_against({}, docs, options);
}

DedupReport dedup_against(std::span<const Document> existing, std::span<const Document> candidates,
                          const DedupOptions& options) {
    check_options(options);
    std::vector<KeptDoc> kept;
    std::unordered_set<std::string> ids;
    kept.reserve(existing.size());
    for (const auto& d : existing) {
        kept.push_back({&d.id, make_shingles(d, options.shingle_k)});
        ids.insert(d.id);
    }
    return greedy_pass(std::move(kept), candidates, std::move(ids), options);
}

// ---- annotation sets -------------------------------------------------------

std::vector<AnnotationTopic> default_annotation_topics() {
    const char* names[] = {"Twitter misinformation flagging", "Mars Lander", "Right to Repair",
                           "Aircraft", "Government", "Historic Scotland Building", "Trade"};
    std::vector<AnnotationTopic> topics;
    for (const char* n : names) topics.push_back({n, n});
    return topics;
}

AnnotationSet build_annotation_set(std::span<const Document> docs,
                                   std::span<const AnnotationTopic> topics,
                                   std::size_t per_topic_min, std::size_t per_topic_max) {
    if (topics.empty()) throw Error(Errc::invalid_argument, "topic list is empty");
    if (per_topic_min > per_topic_max) {
        throw Error(Errc::invalid_argument, "per-topic minimum exceeds maximum");
    }

    std::vector<std::set<std::string>> vocab;
    vocab.reserve(docs.size());
    for (const auto& d : docs) {
        auto words = token_texts(d.title);
        auto body = token_texts(d.body);
        std::set<std::string> all(words.begin(), words.end());
        all.insert(body.begin(), body.end());
        vocab.push_back(std::move(all));
    }

    AnnotationSet set;
    for (const auto& topic : topics) {
        const auto terms = token_texts(topic.query);
        auto& bucket = set.buckets[topic.name];
        for (std::size_t i = 0; i < docs.size() && bucket.size() < per_topic_max; ++i) {
            if (terms.empty()) break;
            const bool all = std::all_of(terms.begin(), terms.end(),
                                         [&](const std::string& t) { return vocab[i].contains(t); });
            if (all) bucket.push_back(docs[i]);
        }
        if (bucket.size() < per_topic_min) {
            set.warnings.push_back("topic '" + topic.name + "': " + std::to_string(bucket.size()) +
                                   " documents, below the minimum of " +
                                   std::to_string(per_topic_min));
        }
    }
    return set;
}

void validate_annotations(const AnnotatedDocument& doc) {
    const std::size_t length = unicode::code_point_length(doc.text);
    std::vector<LabelSpan> sorted = doc.labels;
    std::sort(sorted.begin(), sorted.end(),
              [](const LabelSpan& a, const LabelSpan& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& s = sorted[i];
        if (s.start >= s.end) throw Error(Errc::invalid_argument, "empty or reversed label span");
        if (s.end > length) throw Error(Errc::invalid_argument, "label span beyond text length");
        if (i > 0 && s.start < sorted[i - 1].end) {
            throw Error(Errc::invalid_argument, "overlapping label spans");
        }
    }
}

json annotation_to_json(const AnnotatedDocument& doc) {
    json labels = json::array();
    for (const auto& s : doc.labels) labels.push_back({s.start, s.end, label_name(s.label)});
    json out;
    out["text"] = doc.text;
    out["labels"] = std::move(labels);
    return out;
}

AnnotatedDocument annotation_from_json(const json& record) {
    if (!record.is_object()) throw Error(Errc::parse, "record is not a JSON object");
    auto text = record.find("text");
    auto labels = record.find("labels");
    if (text == record.end() || !text->is_string()) throw Error(Errc::parse, "'text' must be a string");
    if (labels == record.end() || !labels->is_array()) throw Error(Errc::parse, "'labels' must be an array");
    AnnotatedDocument doc;
    doc.text = text->get<std::string>();
    for (const auto& triple : *labels) {
        if (!triple.is_array() || triple.size() != 3 || !triple[0].is_number_unsigned() ||
            !triple[1].is_number_unsigned() || !triple[2].is_string()) {
            throw Error(Errc::parse, "label must be [start, end, label]");
        }
        auto label = parse_label(triple[2].get<std::string>());
        if (!label) throw Error(Errc::parse, "unknown label '" + triple[2].get<std::string>() + "'");
        doc.labels.push_back({triple[0].get<std::size_t>(), triple[1].get<std::size_t>(), *label});
    }
    return doc;
}

void export_annotations(std::span<const AnnotatedDocument> docs, std::ostream& out) {
    for (const auto& d : docs) validate_annotations(d);
    for (const auto& d : docs) out << annotation_to_json(d).dump() << '\n';
}

void export_annotations(std::span<const AnnotatedDocument> docs, const std::filesystem::path& path) {
    for (const auto& d : docs) validate_annotations(d);
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
    export_annotations(docs, out);
}

std::vector<AnnotatedDocument> import_annotations(std::istream& in, const std::string& origin) {
    std::vector<AnnotatedDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        try {
            auto doc = annotation_from_json(json::parse(line));
            validate_annotations(doc);
            docs.push_back(std::move(doc));
        } catch (const json::exception& e) {
            throw Error(Errc::parse, at_line(origin, line_no) + e.what());
        } catch (const Error& e) {
            throw Error(Errc::parse, at_line(origin, line_no) + e.what());
        }
    }
    return docs;
}

std::vector<AnnotatedDocument> import_annotations(const std::filesystem::path& path) {
    auto in = open_input(path);
    return import_annotations(in, path.string());
}

} // namespace dminr
