#include "dminr/external_extractor.hpp"

#include "dminr/error.hpp"

#include <httplib.h>

#include <csignal>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace dminr {

json extract_request_json(const std::string& doc_id, const std::vector<std::string>& tokens) {
    json j;
    j["doc_id"] = doc_id;
    j["tokens"] = tokens;
    return j;
}

namespace {

std::vector<std::string> tags_from_json(const json& response) {
    if (!response.is_object() || !response.contains("tags") || !response["tags"].is_array()) {
        throw Error(Errc::protocol, "response lacks a 'tags' array");
    }
    std::vector<std::string> tags;
    for (const auto& t : response["tags"]) {
        if (!t.is_string()) throw Error(Errc::protocol, "tag is not a string");
        tags.push_back(t.get<std::string>());
    }
    return tags;
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::exception& e) {
        throw Error(Errc::protocol, std::string("malformed extractor response: ") + e.what());
    }
}

} // namespace

std::vector<BioTag> parse_extract_response(const json& response) {
    std::vector<BioTag> out;
    for (const auto& t : tags_from_json(response)) {
        auto tag = parse_bio_tag(t);
        if (!tag) throw Error(Errc::protocol, "unknown tag '" + t + "'");
        out.push_back(*tag);
    }
    return out;
}

// ---- HTTP ------------------------------------------------------------------

HttpExtractor::HttpExtractor(ExtractorEndpoint endpoint)
    : endpoint_(std::move(endpoint)), slots_(std::max(1u, endpoint_.max_connections)) {}

std::vector<std::string> HttpExtractor::exchange(const std::string& doc_id,
                                                 const std::vector<std::string>& tokens) {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{slots_};

    httplib::Client client(endpoint_.url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post("/extract", extract_request_json(doc_id, tokens).dump(), "application/json");
    if (!res) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        if (res.error() == httplib::Error::ConnectionTimeout || elapsed >= endpoint_.timeout) {
            throw Error(Errc::timeout, "extractor timed out at " + endpoint_.url);
        }
        throw Error(Errc::io, "extractor unreachable at " + endpoint_.url + ": " +
                                  httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw Error(Errc::protocol, "extractor returned HTTP " + std::to_string(res->status));
    }
    return tags_from_json(parse_body(res->body));
}

// ---- stdio -----------------------------------------------------------------

StdioExtractor::StdioExtractor(ExtractorEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    std::signal(SIGPIPE, SIG_IGN);
    spawn();
}

StdioExtractor::~StdioExtractor() { shutdown(); }

void StdioExtractor::spawn() {
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe(in_pipe) != 0) throw Error(Errc::io, "pipe failed");
    if (::pipe(out_pipe) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw Error(Errc::io, "pipe failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw Error(Errc::io, "fork failed");
    if (pid == 0) {
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        ::close(out_pipe[1]);
        ::execl("/bin/sh", "sh", "-c", endpoint_.command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::fcntl(in_pipe[1], F_SETFD, FD_CLOEXEC);
    ::fcntl(out_pipe[0], F_SETFD, FD_CLOEXEC);
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    buffer_.clear();
}

void StdioExtractor::shutdown() noexcept {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        ::kill(pid_, SIGTERM);
        ::waitpid(pid_, nullptr, 0);
    }
    pid_ = -1;
}

std::string StdioExtractor::read_line(std::chrono::steady_clock::time_point deadline) {
    for (;;) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) throw Error(Errc::timeout, "extractor process timed out");
        pollfd pfd{from_child_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) continue;
        if (ready <= 0) throw Error(Errc::timeout, "extractor process timed out");
        char chunk[4096];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n <= 0) throw Error(Errc::io, "extractor process closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::vector<std::string> StdioExtractor::exchange(const std::string& doc_id,
                                                  const std::vector<std::string>& tokens) {
    std::lock_guard lock(mutex_);
    if (pid_ < 0) spawn();
    const auto deadline = std::chrono::steady_clock::now() + endpoint_.timeout;
    const std::string line = extract_request_json(doc_id, tokens).dump() + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            shutdown();
            throw Error(Errc::io, "cannot write to extractor process");
        }
        written += static_cast<std::size_t>(n);
    }
    try {
        return tags_from_json(parse_body(read_line(deadline)));
    } catch (const Error& e) {
        // A late or garbled reply would desynchronise the next request.
        if (e.code() != Errc::protocol) shutdown();
        throw;
    }
}

std::unique_ptr<ExternalExtractor> connect_extractor(const ExtractorEndpoint& endpoint) {
    if (endpoint.transport == ExtractorEndpoint::Transport::stdio) {
        return std::make_unique<StdioExtractor>(endpoint);
    }
    return std::make_unique<HttpExtractor>(endpoint);
}

ExternalTags external_extract(const Document& doc, std::span<const Token> tokens,
                              ExternalExtractor& extractor, const Gazetteer& gazetteer,
                              bool fallback) {
    std::vector<std::string> surfaces;
    surfaces.reserve(tokens.size());
    for (const auto& t : tokens) surfaces.push_back(doc.body.substr(t.byte_start, t.byte_end - t.byte_start));

    ExternalTags result;
    try {
        std::vector<BioTag> tags;
        for (const auto& raw : extractor.exchange(doc.id, surfaces)) {
            auto tag = parse_bio_tag(raw);
            if (!tag) throw Error(Errc::protocol, "unknown tag '" + raw + "'");
            tags.push_back(*tag);
        }
        if (tags.size() != tokens.size()) {
            throw Error(Errc::length_mismatch, "extractor returned " + std::to_string(tags.size()) +
                                                   " tags for " + std::to_string(tokens.size()) +
                                                   " tokens");
        }
        result.tags = repair_bio(tags);
        return result;
    } catch (const Error& e) {
        if (!fallback) throw;
        result.fell_back = true;
        result.failure = std::string(errc_name(e.code())) + ": " + e.what();
    }
    result.tags = label_tokens(doc, tokens, gazetteer);
    return result;
}

} // namespace dminr
