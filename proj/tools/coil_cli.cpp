// coil: encode / build / search / bm25 / eval / sample-negs / stats.
//
// Exit codes: 0 success, 1 validation error (flags, dimensions, modes),
// 2 IO error (missing or malformed files, checksum or structure failures).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coil/bm25.hpp"
#include "coil/coil_index.hpp"
#include "coil/corpus_io.hpp"
#include "coil/encoded_io.hpp"
#include "coil/encoder.hpp"
#include "coil/errors.hpp"
#include "coil/eval.hpp"
#include "coil/loss.hpp"
#include "coil/retrieval.hpp"

namespace {

using namespace coil;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct EncodeArgs {
    std::string corpus;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t n_lm = 768;
    std::size_t n_t = 32;
    std::size_t n_c = 768;
    std::size_t max_doc_tokens = 512;
    std::size_t window = 2;
    double mix_weight = 0.5;
    bool layer_norm = false;
    bool case_sensitive = false;
    unsigned threads = 1;
};

struct EncodeQueriesArgs {
    std::string queries;
    std::string out;
    std::string encoder_meta;
    unsigned threads = 1;
};

struct BuildArgs {
    std::string encoded;
    std::string index_dir;
};

struct SearchArgs {
    std::string index_dir;
    std::string queries;
    std::string out;
    std::size_t k = 10;
    std::string mode;
    std::string tag;
    unsigned threads = 1;
    bool instrument = false;
};

struct Bm25Args {
    std::string corpus;
    std::string queries;
    std::string out;
    std::size_t k = 10;
    Bm25Params params;
    std::size_t max_doc_tokens = 512;
    bool case_sensitive = false;
    std::string tag = "bm25";
};

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::string metrics = "mrr@10,recall@1000,ndcg@10";
};

struct SampleArgs {
    std::string corpus;
    std::string queries;
    std::string qrels;
    std::string out;
    std::size_t depth = 1000;
    std::size_t count = 7;
    std::uint64_t seed = 0;
    Bm25Params params;
    std::size_t max_doc_tokens = 512;
};

int cmd_encode(const EncodeArgs& a) {
    EncoderSettings s;
    s.config.n_lm = a.n_lm;
    s.config.n_t = a.n_t;
    s.config.n_c = a.n_c;
    s.config.max_doc_tokens = a.max_doc_tokens;
    s.config.cls_layer_norm = a.layer_norm;
    s.config.mode = natural_mode(a.n_t, a.n_c);
    s.stub = {a.seed, a.window, a.mix_weight};
    s.lowercase = !a.case_sensitive;
    Encoder encoder(s);

    const auto docs = read_documents(a.corpus);
    const auto encoded = encoder.encode_corpus(docs, a.threads);
    EncodedWriter writer(a.out, {a.n_t, a.n_c});
    for (const auto& d : encoded) writer.write(d);
    writer.close();
    save_encoder_meta(encoder_meta_path(a.out), s, encoder.tokenizer().vocab());
    std::cout << "encoded " << writer.count() << " records\n";
    return 0;
}

int cmd_encode_queries(const EncodeQueriesArgs& a) {
    auto meta = load_encoder_meta(a.encoder_meta);
    if (!meta) {
        throw IoError("encoder metadata not found: " + a.encoder_meta);
    }
    const Encoder encoder(meta->first, meta->second);
    const auto queries = read_queries(a.queries);
    const auto encoded = encoder.encode_queries(queries, a.threads);
    EncodedWriter writer(a.out, {meta->first.config.n_t, meta->first.config.n_c});
    for (const auto& q : encoded) writer.write(q);
    writer.close();
    std::cout << "encoded " << writer.count() << " records\n";
    return 0;
}

int cmd_build(const BuildArgs& a) {
    EncodedReader reader(a.encoded);
    const auto header = reader.header();
    const auto meta = load_encoder_meta(encoder_meta_path(a.encoded));

    CoilConfig config;
    std::optional<EncoderSettings> settings;
    Vocabulary vocab;
    if (meta) {
        if (meta->first.config.n_t != header.n_t || meta->first.config.n_c != header.n_c) {
            throw ValidationError("encoder metadata dimensions disagree with " + a.encoded);
        }
        config = meta->first.config;
        settings = meta->first;
        vocab = meta->second;
    } else {
        // External encodings: only the dimensions are known.
        config.n_t = header.n_t;
        config.n_c = header.n_c;
        config.n_lm = std::max<std::size_t>({header.n_t, header.n_c, 1});
        config.mode = natural_mode(header.n_t, header.n_c);
    }
    validate_config(config);

    IndexBuilder builder(config);
    while (auto rec = reader.next()) builder.add(*rec);
    const auto index = std::move(builder).finish(std::move(vocab), std::move(settings));
    save_index(index, a.index_dir);

    const auto stats = index_stats(index);
    std::cout << "indexed " << stats.num_docs << " documents, " << stats.num_lists << " lists, "
              << stats.total_postings << " postings\n";
    return 0;
}

std::vector<EncodedQuery> load_search_queries(const CoilIndex& index, const std::string& path, unsigned threads) {
    if (looks_like_encoded_file(path)) {
        return read_encoded_queries(path);
    }
    if (!index.encoder) {
        throw ValidationError("index has no encoder settings; pass pre-encoded queries");
    }
    const Encoder encoder(*index.encoder, index.vocab);
    return encoder.encode_queries(read_queries(path), threads);
}

int cmd_search(const SearchArgs& a) {
    std::optional<Mode> requested;
    if (!a.mode.empty()) requested = parse_mode(a.mode);
    if (a.k < 1) {
        throw ValidationError("--k must be ≥ 1");
    }
    const auto index = load_index(a.index_dir);
    const Mode mode = requested.value_or(index.config.mode);
    check_mode_supported(mode, index.n_t(), index.n_c());
    const auto queries = load_search_queries(index, a.queries, a.threads);

    const auto start = std::chrono::steady_clock::now();
    const auto results = search_batch(index, queries, {a.k, mode, 1}, a.threads);
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;

    Run run;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (!run.emplace(queries[i].id, results[i].ranking).second) {
            throw ValidationError("duplicate query id '" + queries[i].id + "'");
        }
    }
    write_run(run, a.out, a.tag.empty() ? mode_name(mode) : a.tag);

    if (a.instrument) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            std::set<TokenId> distinct(queries[i].token_ids.begin(), queries[i].token_ids.end());
            distinct.erase(kUnknownToken);
            const auto& ins = results[i].instrumentation;
            nlohmann::ordered_json j;
            j["qid"] = queries[i].id;
            j["distinct_query_tokens"] = distinct.size();
            j["lists_touched"] = ins.lists_touched;
            j["postings_scanned"] = ins.postings_scanned;
            j["candidates"] = ins.candidates;
            std::cout << j.dump() << '\n';
        }
    }
    std::cerr << "searched " << queries.size() << " queries in mode " << mode_name(mode) << ", mean latency "
              << (queries.empty() ? 0.0 : elapsed.count() / static_cast<double>(queries.size())) << " ms\n";
    return 0;
}

int cmd_bm25(const Bm25Args& a) {
    validate_bm25_params(a.params);
    if (a.k < 1) {
        throw ValidationError("--k must be ≥ 1");
    }
    const auto docs = read_documents(a.corpus);
    const auto queries = read_queries(a.queries);
    const auto index = build_bm25_index(docs, Tokenizer(!a.case_sensitive), a.max_doc_tokens);
    Run run;
    for (const auto& q : queries) {
        if (!run.emplace(q.id, bm25_search(index, q, a.k, a.params)).second) {
            throw ValidationError("duplicate query id '" + q.id + "'");
        }
    }
    write_run(run, a.out, a.tag);
    std::cout << "ranked " << queries.size() << " queries over " << index.num_docs() << " documents\n";
    return 0;
}

int cmd_eval(const EvalArgs& a) {
    std::vector<MetricSpec> specs;
    std::stringstream ss(a.metrics);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) specs.push_back(parse_metric_spec(item));
    }
    if (specs.empty()) {
        throw ValidationError("--metrics lists no metrics");
    }
    const auto run = read_run(a.run);
    const auto qrels = read_qrels(a.qrels);
    std::cout << format_report(evaluate(run, qrels, specs));
    return 0;
}

int cmd_sample_negs(const SampleArgs& a) {
    validate_bm25_params(a.params);
    if (a.depth < a.count) {
        throw ValidationError("--depth must be ≥ --count");
    }
    const auto docs = read_documents(a.corpus);
    const auto queries = read_queries(a.queries);
    const auto qrels = read_qrels(a.qrels);
    const auto index = build_bm25_index(docs, Tokenizer{}, a.max_doc_tokens);

    std::vector<TrainingExample> examples;
    for (const auto& q : queries) {
        const auto it = qrels.judgments.find(q.id);
        if (it == qrels.judgments.end()) continue;
        std::unordered_set<std::string> positives;
        for (const auto& [doc, rel] : it->second) {
            if (rel >= 1) positives.insert(doc);
        }
        // std::map iteration keeps positives in doc id order.
        for (const auto& [doc, rel] : it->second) {
            if (rel < 1) continue;
            Fnv1a64 h;
            h.update_u64(a.seed);
            h.update(q.id);
            h.update(std::string_view("\0", 1));
            h.update(doc);
            examples.push_back(
                {q.id, doc, sample_bm25_negatives(index, q, positives, a.depth, a.count, h.digest(), a.params)});
        }
    }
    write_training_examples(a.out, examples);
    std::cout << "wrote " << examples.size() << " training examples\n";
    return 0;
}

int cmd_stats(const std::string& index_dir) {
    const auto stats = index_stats(load_index(index_dir));
    nlohmann::ordered_json j;
    j["num_docs"] = stats.num_docs;
    j["num_lists"] = stats.num_lists;
    j["total_postings"] = stats.total_postings;
    j["bytes_on_disk"] = stats.bytes_on_disk;
    j["list_size_histogram"] = stats.list_size_histogram;
    std::cout << j.dump() << '\n';
    return 0;
}

void add_bm25_flags(CLI::App* cmd, Bm25Params& p) {
    cmd->add_option("--k1", p.k1, "BM25 k1")->capture_default_str();
    cmd->add_option("--b", p.b, "BM25 b")->capture_default_str();
    cmd->add_option("--k2", p.k2, "BM25 k2 (query term saturation)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"COIL contextualized exact-match retrieval"};
    app.require_subcommand(1);

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Encode a document corpus with the stub contextualizer");
    encode->add_option("corpus", enc.corpus, "Documents, one {\"id\",\"text\"} JSON object per line")->required();
    encode->add_option("out", enc.out, "Encoded-record output file")->required();
    encode->add_option("--stub-seed", enc.seed, "Contextualizer and projection seed")->capture_default_str();
    encode->add_option("--n-lm", enc.n_lm, "Contextualizer output dimension")->capture_default_str();
    encode->add_option("--n-t", enc.n_t, "Token vector dimension (0 disables token matching)")->capture_default_str();
    encode->add_option("--n-c", enc.n_c, "CLS vector dimension (0 disables CLS matching)")->capture_default_str();
    encode->add_option("--max-doc-tokens", enc.max_doc_tokens, "Document truncation length")->capture_default_str();
    encode->add_option("--window", enc.window, "Contextualizer neighbour window")->capture_default_str();
    encode->add_option("--mix-weight", enc.mix_weight, "Weight of the neighbour mean")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    encode->add_flag("--layer-norm", enc.layer_norm, "Layer-normalize projected CLS vectors");
    encode->add_flag("--case-sensitive", enc.case_sensitive, "Do not lowercase text");
    encode->add_option("--threads", enc.threads, "Encoding threads")->check(CLI::PositiveNumber);

    EncodeQueriesArgs encq;
    auto* encode_queries = app.add_subcommand("encode-queries", "Encode queries against an encoded corpus");
    encode_queries->add_option("queries", encq.queries, "Queries, one {\"id\",\"text\"} per line")->required();
    encode_queries->add_option("out", encq.out, "Encoded-record output file")->required();
    encode_queries->add_option("--encoder-meta", encq.encoder_meta, "Sidecar written by encode (<encoded>.meta.json)")
        ->required();
    encode_queries->add_option("--threads", encq.threads, "Encoding threads")->check(CLI::PositiveNumber);

    BuildArgs bld;
    auto* build = app.add_subcommand("build", "Build a COIL index from an encoded corpus");
    build->add_option("encoded", bld.encoded, "Encoded-record file")->required();
    build->add_option("index_dir", bld.index_dir, "Output index directory")->required();

    SearchArgs srch;
    auto* search_cmd = app.add_subcommand("search", "Search a COIL index and write a TREC run");
    search_cmd->add_option("index_dir", srch.index_dir, "Index directory")->required();
    search_cmd->add_option("queries", srch.queries, "Text queries or an encoded-record file")->required();
    search_cmd->add_option("out", srch.out, "TREC run output file")->required();
    search_cmd->add_option("--k", srch.k, "Results per query")->capture_default_str();
    search_cmd->add_option("--mode", srch.mode, "tok, full or cls_only (default: the index's mode)");
    search_cmd->add_option("--tag", srch.tag, "Run tag (default: the mode name)");
    search_cmd->add_option("--threads", srch.threads, "Query threads")->check(CLI::PositiveNumber);
    search_cmd->add_flag("--instrument", srch.instrument, "Print per-query search counters as JSON lines");

    Bm25Args bm;
    auto* bm25 = app.add_subcommand("bm25", "Rank with BM25 and write a TREC run");
    bm25->add_option("corpus", bm.corpus, "Documents")->required();
    bm25->add_option("queries", bm.queries, "Queries")->required();
    bm25->add_option("out", bm.out, "TREC run output file")->required();
    bm25->add_option("--k", bm.k, "Results per query")->capture_default_str();
    add_bm25_flags(bm25, bm.params);
    bm25->add_option("--max-doc-tokens", bm.max_doc_tokens, "Document truncation length")->capture_default_str();
    bm25->add_flag("--case-sensitive", bm.case_sensitive, "Do not lowercase text");
    bm25->add_option("--tag", bm.tag, "Run tag")->capture_default_str();

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Score a TREC run against qrels");
    eval->add_option("run", ev.run, "TREC run file")->required();
    eval->add_option("qrels", ev.qrels, "TREC qrels file")->required();
    eval->add_option("--metrics", ev.metrics, "Comma separated name@k list (mrr, recall, ndcg)")
        ->capture_default_str();

    SampleArgs smp;
    auto* sample = app.add_subcommand("sample-negs", "Sample BM25 hard negatives into training examples");
    sample->add_option("corpus", smp.corpus, "Documents")->required();
    sample->add_option("queries", smp.queries, "Queries")->required();
    sample->add_option("qrels", smp.qrels, "Qrels naming the positives")->required();
    sample->add_option("out", smp.out, "Training-example output file")->required();
    sample->add_option("--depth", smp.depth, "BM25 depth to sample from")->capture_default_str();
    sample->add_option("--count", smp.count, "Negatives per example")->capture_default_str();
    sample->add_option("--seed", smp.seed, "Sampling seed")->capture_default_str();
    sample->add_option("--max-doc-tokens", smp.max_doc_tokens, "Document truncation length")->capture_default_str();
    add_bm25_flags(sample, smp.params);

    std::string stats_dir;
    auto* stats = app.add_subcommand("stats", "Print index statistics as JSON");
    stats->add_option("index_dir", stats_dir, "Index directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*encode) return cmd_encode(enc);
        if (*encode_queries) return cmd_encode_queries(encq);
        if (*build) return cmd_build(bld);
        if (*search_cmd) return cmd_search(srch);
        if (*bm25) return cmd_bm25(bm);
        if (*eval) return cmd_eval(ev);
        if (*sample) return cmd_sample_negs(smp);
        if (*stats) return cmd_stats(stats_dir);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
