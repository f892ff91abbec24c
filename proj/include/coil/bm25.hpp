#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coil/tokenizer.hpp"
#include "coil/types.hpp"

namespace coil {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
    double k2 = 0.0;
};

void validate_bm25_params(const Bm25Params& params);

struct Posting {
    DocOrdinal doc = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Classic term -> (doc, tf) inverted index. Postings are sorted by ordinal.
class Bm25Index {
  public:
    std::size_t num_docs() const noexcept { return doc_len_.size(); }
    double avgdl() const noexcept { return avgdl_; }
    std::size_t doc_len(DocOrdinal doc) const { return doc_len_.at(doc); }
    const std::string& doc_id(DocOrdinal doc) const { return doc_table_.at(doc); }
    std::size_t df(TokenId token) const;
    /// Empty span when the token has no postings.
    std::span<const Posting> postings(TokenId token) const;
    std::uint32_t tf(TokenId token, DocOrdinal doc) const;

    /// Tokenizes query text against the corpus vocabulary.
    TokenSeq tokenize_query(std::string_view text) const { return tokenizer_.tokenize(text); }
    const Tokenizer& tokenizer() const noexcept { return tokenizer_; }

    friend Bm25Index build_bm25_index(std::span<const Document> docs, Tokenizer tokenizer,
                                      std::size_t max_doc_tokens);

  private:
    Tokenizer tokenizer_;
    std::unordered_map<TokenId, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_len_;
    std::vector<std::string> doc_table_;
    double avgdl_ = 0.0;
};

/// Tokenizes each document (extending `tokenizer`'s vocabulary), truncates to
/// `max_doc_tokens`, and records tf / df / length statistics.
Bm25Index build_bm25_index(std::span<const Document> docs, Tokenizer tokenizer = Tokenizer{},
                           std::size_t max_doc_tokens = 512);

/// ln((N - df + 0.5) / (df + 0.5) + 1)
double bm25_idf(std::size_t num_docs, std::size_t df);

/// Sum over distinct overlapping terms, in ascending token id order, of
/// idf * h_q * h_d.
double bm25_score_pair(const TokenSeq& query, DocOrdinal doc, const Bm25Index& index, const Bm25Params& params);

/// Ranks exactly the documents that share a term with the query.
RankedList bm25_search(const Bm25Index& index, const Query& query, std::size_t k, const Bm25Params& params);
RankedList bm25_search(const Bm25Index& index, std::string query_id, const TokenSeq& query, std::size_t k,
                       const Bm25Params& params);

/// Uniformly samples `count` distinct ids from the top-`depth` BM25 results
/// after removing `positive_ids`. Returns every candidate when fewer remain.
std::vector<std::string> sample_bm25_negatives(const Bm25Index& index, const Query& query,
                                               const std::unordered_set<std::string>& positive_ids,
                                               std::size_t depth = 1000, std::size_t count = 7,
                                               std::uint64_t seed = 0, const Bm25Params& params = {});

}  // namespace coil
