// dminr: offline pipeline stages, evaluation, benchmarking and the HTTP service.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include "dminr/bm25.hpp"
#include "dminr/config.hpp"
#include "dminr/corpus.hpp"
#include "dminr/error.hpp"
#include "dminr/evaluate.hpp"
#include "dminr/http_api.hpp"
#include "dminr/inverted_index.hpp"
#include "dminr/pipeline.hpp"
#include "dminr/service.hpp"
#include "dminr/sources.hpp"
#include "dminr/synth.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

namespace {

using namespace dminr;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

int exit_code_for(Errc code) {
    switch (code) {
    case Errc::invalid_argument:
    case Errc::not_found:
    case Errc::parse:
    case Errc::duplicate_id:
    case Errc::io:
    case Errc::length_mismatch:
        return kExitData;
    default:
        return kExitInternal;
    }
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error(Errc::io, "cannot write '" + path + "'");
    out << text;
}

struct IngestOptions {
    std::string in;
    std::string out;
    std::size_t k = 5;
    double threshold = 0.8;
};

int cmd_ingest(const IngestOptions& o) {
    const auto docs = load_corpus(o.in);
    const auto report = dedup(docs, {o.k, o.threshold});
    write_output(dedup_report_to_json(report).dump(2) + "\n", o.out);
    std::cerr << "ingest: " << docs.size() << " documents, " << report.kept.size() << " kept, "
              << report.dropped.size() << " dropped\n";
    return 0;
}

struct PipelineOptions {
    std::string in;
    std::string gazetteer;
    std::string graph_out;
    std::string query = "pipeline";
    std::size_t k = kDefaultTopEntities;
    unsigned workers = 1;
    double k1 = 1.2;
    double b = 0.75;
};

int cmd_pipeline(const PipelineOptions& o) {
    const auto docs = load_corpus(o.in);
    PipelineConfig config;
    config.top_k = o.k;
    config.workers = o.workers;
    config.bm25 = {o.k1, o.b};
    if (!o.gazetteer.empty()) config.gazetteer = o.gazetteer;
    const EntityPipeline pipeline(config);
    const auto result = pipeline.run(docs, o.query);

    std::printf("rank\tscore\tlabel\tentity\tdocs\n");
    std::size_t rank = 0;
    for (const auto& e : result.ranked.entries) {
        std::string ids;
        for (const auto& id : e.doc_ids) ids += (ids.empty() ? "" : ",") + id;
        std::printf("%zu\t%.6f\t%s\t%s\t%s\n", ++rank, e.score, std::string(label_name(e.label())).c_str(),
                    e.display.c_str(), ids.c_str());
    }
    const auto graph = export_graph(result.graph).dump(2) + "\n";
    if (o.graph_out.empty()) {
        std::cout << "\n" << graph;
    } else {
        write_output(graph, o.graph_out);
    }
    return 0;
}

struct EvalOptions {
    std::string gold;
    std::string gazetteer;
    bool as_json = false;
};

int cmd_eval(const EvalOptions& o) {
    const auto gold = import_annotations(std::filesystem::path(o.gold));
    const auto gazetteer = load_gazetteer(o.gazetteer);
    std::vector<std::vector<EntityMention>> predicted;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        Document doc;
        doc.id = "gold-" + std::to_string(i + 1);
        doc.body = gold[i].text;
        const auto tokens = tokenize(doc.body);
        predicted.push_back(decode_mentions(label_tokens(doc, tokens, gazetteer), tokens, doc));
    }
    const auto eval = evaluate(gold, predicted);
    if (o.as_json) {
        std::cout << eval_to_json(eval).dump(2) << "\n";
        return 0;
    }
    std::printf("documents %zu\n", gold.size());
    std::printf("tp %zu fp %zu fn %zu\n", eval.overall.tp, eval.overall.fp, eval.overall.fn);
    std::printf("precision %.3f\nrecall %.3f\nf1 %.3f\n", eval.precision(), eval.recall(), eval.f1());
    for (const auto& [label, c] : eval.per_label) {
        std::printf("%-4s p=%.3f r=%.3f f1=%.3f (tp %zu fp %zu fn %zu)\n",
                    std::string(label_name(label)).c_str(), c.precision(), c.recall(), c.f1(), c.tp, c.fp, c.fn);
    }
    return 0;
}

struct BenchOptions {
    std::string in;
    std::size_t synth = 0;
    std::uint64_t seed = kDefaultSynthSeed;
    std::vector<unsigned> workers{1, 2, 4, 8};
};

int cmd_bench(const BenchOptions& o) {
    if (o.in.empty() == (o.synth == 0)) throw Error(Errc::invalid_argument, "give exactly one of --in or --synth");
    const auto docs = o.in.empty() ? synthetic_corpus(o.synth, o.seed) : load_corpus(o.in);

    std::printf("# reference: parallel tokenisation was reported to speed up all relevant operations by at\n");
    std::printf("# least 4x, and index structure creation by 10x or more on large corpora; speedups below\n");
    std::printf("# depend on this machine (%u hardware threads) and are not asserted.\n",
                std::thread::hardware_concurrency());
    std::printf("workers,docs,build_ms,speedup\n");

    double base_ms = 0.0;
    std::optional<std::uint64_t> first_digest;
    bool identical = true;
    std::vector<std::string> digests;
    for (std::size_t i = 0; i < o.workers.size(); ++i) {
        const unsigned w = o.workers[i];
        const auto start = std::chrono::steady_clock::now();
        const auto index = build_index(docs, w);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (i == 0) base_ms = ms;
        const auto digest = index.digest();
        if (!first_digest) first_digest = digest;
        identical = identical && digest == *first_digest;
        digests.push_back("# digest workers=" + std::to_string(w) + " " + digest_hex(digest));
        std::printf("%u,%zu,%.3f,%.3f\n", w, docs.size(), ms, ms > 0.0 ? base_ms / ms : 1.0);
    }
    for (const auto& d : digests) std::printf("%s\n", d.c_str());
    std::printf("# digests %s\n", identical ? "identical" : "DIFFER");
    return identical ? 0 : kExitInternal;
}

struct ServeOptions {
    std::string config;
    std::string fixtures;
    std::string gazetteer;
    std::string log;
    std::string host;
    int port = -1;
    bool check = false;
};

int cmd_serve(const ServeOptions& o) {
    ServiceConfig config;
    if (!o.config.empty()) config = load_config(o.config);
    if (!o.fixtures.empty()) {
        if (!std::filesystem::is_directory(o.fixtures)) {
            throw Error(Errc::io, "fixture directory '" + o.fixtures + "' does not exist");
        }
        // Either a directory holding the four source files, or a fixture root
        // with them under sources/ and an optional gazetteer.tsv.
        const std::filesystem::path root = o.fixtures;
        const bool nested = std::filesystem::exists(root / "sources" / "articles.jsonl");
        config.sources = SourcesConfig::from_fixture_dir(nested ? root / "sources" : root);
        if (nested && !config.pipeline.gazetteer && std::filesystem::exists(root / "gazetteer.tsv")) {
            config.pipeline.gazetteer = root / "gazetteer.tsv";
        }
    }
    if (!o.gazetteer.empty()) config.pipeline.gazetteer = o.gazetteer;
    if (!o.log.empty()) config.event_log = o.log;
    if (!o.host.empty()) config.host = o.host;
    if (o.port >= 0) config.port = o.port;

    if (o.check) {
        const SourceHub hub(config.sources);
        const EntityPipeline pipeline(config.pipeline);
        std::cout << "config ok: " << config.host << ":" << config.port << ", "
                  << pipeline.gazetteer().size() << " gazetteer phrases\n";
        return 0;
    }
    SessionService service(config);
    ApiServer server(service);
    server.serve_forever(config.host, config.port);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dminr: exploratory entity search for journalists"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    IngestOptions ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Load a JSONL corpus and report near-duplicates");
    ingest_cmd->add_option("--in", ingest.in, "Corpus JSONL")->required();
    ingest_cmd->add_option("--k", ingest.k, "Shingle size in tokens")->check(CLI::PositiveNumber);
    ingest_cmd->add_option("--threshold", ingest.threshold, "Jaccard threshold in (0, 1]")
        ->check(CLI::Range(0.0, 1.0));
    ingest_cmd->add_option("--out", ingest.out, "Report path (default stdout)");

    PipelineOptions pipe;
    auto* pipe_cmd = app.add_subcommand("pipeline", "Index, extract, rank and graph a local corpus");
    pipe_cmd->add_option("--in", pipe.in, "Corpus JSONL")->required();
    pipe_cmd->add_option("--gazetteer", pipe.gazetteer, "Gazetteer TSV");
    pipe_cmd->add_option("--k", pipe.k, "Number of entities to keep")->check(CLI::PositiveNumber);
    pipe_cmd->add_option("--workers", pipe.workers, "Indexing threads")->check(CLI::PositiveNumber);
    pipe_cmd->add_option("--query", pipe.query, "Query label recorded on graph nodes");
    pipe_cmd->add_option("--graph-out", pipe.graph_out, "Write the node-link graph here instead of stdout");
    pipe_cmd->add_option("--k1", pipe.k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    pipe_cmd->add_option("--b", pipe.b, "BM25 b")->check(CLI::Range(0.0, 1.0));

    EvalOptions eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score the baseline extractor against gold annotations");
    eval_cmd->add_option("--gold", eval.gold, "Gold annotation JSONL")->required();
    eval_cmd->add_option("--gazetteer", eval.gazetteer, "Gazetteer TSV")->required();
    eval_cmd->add_flag("--json", eval.as_json, "Print the report as JSON");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time index construction across worker counts");
    bench_cmd->add_option("--in", bench.in, "Corpus JSONL");
    bench_cmd->add_option("--synth", bench.synth, "Generate N synthetic documents instead");
    bench_cmd->add_option("--seed", bench.seed, "Seed for --synth");
    bench_cmd->add_option("--workers", bench.workers, "Comma-separated worker counts")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);

    ServeOptions serve;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
    serve_cmd->add_option("--config", serve.config, "Config file");
    serve_cmd->add_option("--fixtures", serve.fixtures,
                           "Fixture directory (the source files, or a root with sources/ and gazetteer.tsv)");
    serve_cmd->add_option("--gazetteer", serve.gazetteer, "Gazetteer TSV");
    serve_cmd->add_option("--log", serve.log, "Event log path");
    serve_cmd->add_option("--host", serve.host, "Bind address");
    serve_cmd->add_option("--port", serve.port, "Port")->check(CLI::Range(0, 65535));
    serve_cmd->add_flag("--check", serve.check, "Validate the configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
    spdlog::set_default_logger(spdlog::default_logger()); // stderr sink

    try {
        if (*ingest_cmd) return cmd_ingest(ingest);
        if (*pipe_cmd) return cmd_pipeline(pipe);
        if (*eval_cmd) return cmd_eval(eval);
        if (*bench_cmd) return cmd_bench(bench);
        if (*serve_cmd) return cmd_serve(serve);
    } catch (const StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
