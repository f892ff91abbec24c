#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coil/encoder.hpp"
#include "coil/types.hpp"

namespace coil::testing {

/// Scratch directory removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("coil_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Random text over words "w0".."w{vocab-1}" with lengths in [min_len, max_len].
inline std::string random_text(std::mt19937_64& rng, std::size_t vocab, std::size_t min_len, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    const std::size_t n = len(rng);
    std::string text;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) text += ' ';
        text += "w" + std::to_string(word(rng));
    }
    return text;
}

inline std::vector<Document> random_corpus(std::mt19937_64& rng, std::size_t num_docs, std::size_t vocab,
                                           std::size_t max_len) {
    std::vector<Document> docs;
    docs.reserve(num_docs);
    for (std::size_t i = 0; i < num_docs; ++i) {
        docs.push_back({"d" + std::to_string(i), random_text(rng, vocab, 0, max_len)});
    }
    return docs;
}

inline std::vector<Query> random_queries(std::mt19937_64& rng, std::size_t num_queries, std::size_t vocab,
                                         std::size_t max_len) {
    std::vector<Query> qs;
    for (std::size_t i = 0; i < num_queries; ++i) {
        // A slightly larger word range yields some out-of-vocabulary query tokens.
        qs.push_back({"q" + std::to_string(i), random_text(rng, vocab + 5, 1, max_len)});
    }
    return qs;
}

/// Hand-built encoded sequence; `vecs` holds one row per token.
inline EncodedSequence make_seq(std::string id, std::vector<TokenId> ids, std::vector<std::vector<float>> vecs,
                                std::vector<float> cls = {}, std::size_t dim = 0) {
    EncodedSequence s;
    s.id = std::move(id);
    s.token_ids = std::move(ids);
    s.token_dim = vecs.empty() ? dim : vecs.front().size();
    for (const auto& v : vecs) s.token_vecs.insert(s.token_vecs.end(), v.begin(), v.end());
    s.cls_vec = std::move(cls);
    return s;
}

inline EncoderSettings small_settings(std::size_t n_t, std::size_t n_c, std::uint64_t seed = 7,
                                      std::size_t n_lm = 16) {
    EncoderSettings s;
    s.config.n_lm = n_lm;
    s.config.n_t = n_t;
    s.config.n_c = n_c;
    s.config.mode = n_t == 0 ? Mode::kClsOnly : (n_c == 0 ? Mode::kTok : Mode::kFull);
    s.stub.seed = seed;
    return s;
}

}  // namespace coil::testing
