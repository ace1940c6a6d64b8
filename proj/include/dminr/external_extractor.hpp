#pragma once

#include "dminr/entity.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <semaphore>
#include <span>
#include <string>
#include <vector>

namespace dminr {

// Where a token-labelling model lives. Requests are
//   {"doc_id": "...", "tokens": ["Acme", "Corp", ...]}
// and responses {"tags": ["B-ORG", "I-ORG", ...]}, either as an HTTP POST to
// <url>/extract or as single JSON lines over a child process's stdin/stdout.
struct ExtractorEndpoint {
    enum class Transport { http, stdio };

    Transport transport = Transport::http;
    std::string url;     // http: scheme://host:port
    std::string command; // stdio: run through /bin/sh -c
    std::chrono::milliseconds timeout{10'000};
    bool fallback = true;
    unsigned max_connections = 4;
};

class ExternalExtractor {
public:
    virtual ~ExternalExtractor() = default;

    // Raw protocol exchange. Throws Error(timeout|io|protocol).
    virtual std::vector<std::string> exchange(const std::string& doc_id,
                                              const std::vector<std::string>& tokens) = 0;
};

class HttpExtractor final : public ExternalExtractor {
public:
    explicit HttpExtractor(ExtractorEndpoint endpoint);
    std::vector<std::string> exchange(const std::string& doc_id,
                                      const std::vector<std::string>& tokens) override;

private:
    ExtractorEndpoint endpoint_;
    std::counting_semaphore<> slots_;
};

// Keeps one child process alive; requests are serialised.
class StdioExtractor final : public ExternalExtractor {
public:
    explicit StdioExtractor(ExtractorEndpoint endpoint);
    ~StdioExtractor() override;
    StdioExtractor(const StdioExtractor&) = delete;
    StdioExtractor& operator=(const StdioExtractor&) = delete;

    std::vector<std::string> exchange(const std::string& doc_id,
                                      const std::vector<std::string>& tokens) override;

private:
    void spawn();
    void shutdown() noexcept;
    std::string read_line(std::chrono::steady_clock::time_point deadline);

    ExtractorEndpoint endpoint_;
    std::mutex mutex_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

std::unique_ptr<ExternalExtractor> connect_extractor(const ExtractorEndpoint& endpoint);

json extract_request_json(const std::string& doc_id, const std::vector<std::string>& tokens);
// Parses {"tags": [...]}. Throws Error(protocol).
std::vector<BioTag> parse_extract_response(const json& response);

struct ExternalTags {
    std::vector<BioTag> tags;
    bool fell_back = false;
    std::string failure; // why the fallback was taken
};

// Labels `doc` through the external model. The response must carry one tag per
// token; invalid I- tags are repaired. On any failure the baseline labeller is
// used when `fallback` is set, otherwise the error propagates.
ExternalTags external_extract(const Document& doc, std::span<const Token> tokens,
                              ExternalExtractor& extractor, const Gazetteer& gazetteer,
                              bool fallback = true);

} // namespace dminr
