#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coil {

using TokenId = std::uint32_t;
using DocOrdinal = std::uint32_t;

/// Id reserved for tokens that are not in the vocabulary.
inline constexpr TokenId kUnknownToken = 0;

struct Document {
    std::string id;
    std::string text;
};

struct Query {
    std::string id;
    std::string text;
};

/// Parallel surface tokens and vocabulary ids.
struct TokenSeq {
    std::vector<std::string> tokens;
    std::vector<TokenId> token_ids;

    std::size_t size() const noexcept { return token_ids.size(); }
    bool empty() const noexcept { return token_ids.empty(); }
    void truncate(std::size_t n);

    friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

/// Per-token vectors plus an optional sequence-level (CLS) vector.
///
/// `token_vecs` is row-per-position: position i occupies
/// `[i * token_dim, (i + 1) * token_dim)`. `cls_vec` is empty when the CLS
/// component is disabled (n_c = 0).
struct EncodedSequence {
    std::string id;
    std::vector<TokenId> token_ids;
    std::size_t token_dim = 0;
    std::vector<float> token_vecs;
    std::vector<float> cls_vec;

    std::size_t size() const noexcept { return token_ids.size(); }
    bool has_cls() const noexcept { return !cls_vec.empty(); }

    std::span<const float> token_vec(std::size_t i) const {
        return {token_vecs.data() + i * token_dim, token_dim};
    }
    std::span<float> token_vec(std::size_t i) {
        return {token_vecs.data() + i * token_dim, token_dim};
    }

    friend bool operator==(const EncodedSequence&, const EncodedSequence&) = default;
};

struct EncodedDocument : EncodedSequence {};
struct EncodedQuery : EncodedSequence {};

struct ScoredDoc {
    std::string doc_id;
    float score = 0.0F;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Descending score, ties by ascending doc id.
inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.doc_id < b.doc_id;
}

struct RankedList {
    std::string query_id;
    std::vector<ScoredDoc> entries;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Orders `entries` by the global tie rule and keeps the first `k`.
RankedList make_ranked_list(std::string query_id, std::vector<ScoredDoc> entries, std::size_t k);

/// True when the entries are ordered by the tie rule and no doc id repeats.
bool is_well_ordered(const RankedList& list);

/// Ids go into whitespace-separated TREC files, so they must be non-empty and
/// free of whitespace.
bool is_valid_id(std::string_view id);

}  // namespace coil
