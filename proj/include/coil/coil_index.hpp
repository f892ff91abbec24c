#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "coil/config.hpp"
#include "coil/encoder.hpp"
#include "coil/hash.hpp"
#include "coil/tokenizer.hpp"
#include "coil/types.hpp"

namespace coil {

/// Contextualized inverted list of one token: every occurrence vector of the
/// token in the corpus, stacked as the columns of an n_t x N matrix.
///
/// Columns are contiguous (column c occupies `[c * n_t, (c + 1) * n_t)`) and
/// appear in (document ordinal, position) order, so `doc_refs` is
/// nondecreasing.
struct InvertedList {
    TokenId token_id = 0;
    std::size_t n_t = 0;
    std::vector<float> vecs;
    std::vector<DocOrdinal> doc_refs;

    std::size_t size() const noexcept { return doc_refs.size(); }
    std::span<const float> column(std::size_t c) const { return {vecs.data() + c * n_t, n_t}; }

    friend bool operator==(const InvertedList&, const InvertedList&) = default;
};

struct CoilIndex {
    CoilConfig config;
    std::map<TokenId, InvertedList> lists;
    /// n_c x |C|, column k is document k's CLS vector. Empty when n_c = 0.
    std::vector<float> cls_matrix;
    std::vector<std::string> doc_table;
    std::uint64_t corpus_checksum = Fnv1a64::kOffsetBasis;
    Vocabulary vocab;
    /// Present when the corpus came from the stub encoder, so text queries can
    /// be encoded the same way.
    std::optional<EncoderSettings> encoder;

    std::size_t num_docs() const noexcept { return doc_table.size(); }
    std::size_t n_t() const noexcept { return config.n_t; }
    std::size_t n_c() const noexcept { return config.n_c; }

    const InvertedList* find_list(TokenId token) const;
    std::span<const float> cls_column(DocOrdinal doc) const {
        return {cls_matrix.data() + static_cast<std::size_t>(doc) * config.n_c, config.n_c};
    }
};

/// Streaming builder; documents receive ordinals in insertion order.
class IndexBuilder {
  public:
    /// `config.n_t` / `config.n_c` fix the accepted dimensions.
    explicit IndexBuilder(CoilConfig config);

    /// Throws ValidationError on a duplicate id, an invalid id, or dimensions
    /// that disagree with the config.
    void add(const EncodedSequence& doc);

    CoilIndex finish(Vocabulary vocab = {}, std::optional<EncoderSettings> encoder = std::nullopt) &&;

  private:
    CoilIndex index_;
    std::unordered_set<std::string> seen_;
    Fnv1a64 checksum_;
};

CoilIndex build_index(std::span<const EncodedDocument> docs, const CoilConfig& config);

/// Writes meta.json, postings.bin and cls.bin into `dir` (created if needed).
void save_index(const CoilIndex& index, const std::string& dir);

/// Verifies per-file checksums and cross-file structure before decoding.
CoilIndex load_index(const std::string& dir);

struct IndexStats {
    std::size_t num_docs = 0;
    std::size_t num_lists = 0;
    std::size_t total_postings = 0;
    /// Payload bytes of postings.bin and cls.bin: list headers, ordinals and
    /// vectors, excluding the fixed file headers and meta.json.
    std::size_t bytes_on_disk = 0;
    /// Bucket b counts lists whose size lies in [2^b, 2^(b+1)).
    std::vector<std::size_t> list_size_histogram;
};

IndexStats index_stats(const CoilIndex& index);

}  // namespace coil
