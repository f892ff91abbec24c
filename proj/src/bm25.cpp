#include "coil/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "coil/errors.hpp"
#include "coil/hash.hpp"

namespace coil {

namespace {

/// Query term frequencies keyed (and therefore iterated) by ascending token id.
std::map<TokenId, std::uint32_t> query_term_counts(const TokenSeq& query) {
    std::map<TokenId, std::uint32_t> tf;
    for (TokenId t : query.token_ids) {
        if (t != kUnknownToken) {
            ++tf[t];
        }
    }
    return tf;
}

double term_weight(std::size_t num_docs, std::size_t df, std::uint32_t tf_q, std::uint32_t tf_d, double doc_len,
                   double avgdl, const Bm25Params& p) {
    const double tq = tf_q;
    const double td = tf_d;
    const double h_q = tq * (1.0 + p.k2) / (tq + p.k2);
    const double norm = avgdl > 0.0 ? doc_len / avgdl : 0.0;
    const double h_d = td * (1.0 + p.k1) / (td + p.k1 * (1.0 - p.b + p.b * norm));
    return bm25_idf(num_docs, df) * h_q * h_d;
}

}  // namespace

void validate_bm25_params(const Bm25Params& p) {
    if (!std::isfinite(p.k1) || p.k1 < 0.0) {
        throw ValidationError("k1 must be finite and ≥ 0");
    }
    if (!std::isfinite(p.b) || p.b < 0.0 || p.b > 1.0) {
        throw ValidationError("b must lie in [0, 1]");
    }
    if (!std::isfinite(p.k2) || p.k2 < 0.0) {
        throw ValidationError("k2 must be finite and ≥ 0");
    }
}

std::size_t Bm25Index::df(TokenId token) const { return postings(token).size(); }

std::span<const Posting> Bm25Index::postings(TokenId token) const {
    auto it = postings_.find(token);
    if (it == postings_.end()) {
        return {};
    }
    return it->second;
}

std::uint32_t Bm25Index::tf(TokenId token, DocOrdinal doc) const {
    const auto list = postings(token);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, DocOrdinal d) { return p.doc < d; });
    return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

Bm25Index build_bm25_index(std::span<const Document> docs, Tokenizer tokenizer, std::size_t max_doc_tokens) {
    Bm25Index index;
    std::unordered_set<std::string> seen;
    double total_len = 0.0;
    for (const auto& doc : docs) {
        if (!is_valid_id(doc.id)) {
            throw ValidationError("document id '" + doc.id + "' is empty or contains whitespace");
        }
        if (!seen.insert(doc.id).second) {
            throw ValidationError("duplicate doc_id '" + doc.id + "'");
        }
        TokenSeq seq = tokenizer.tokenize_and_extend(doc.text);
        seq.truncate(max_doc_tokens);

        const auto ordinal = static_cast<DocOrdinal>(index.doc_table_.size());
        std::map<TokenId, std::uint32_t> counts;
        for (TokenId t : seq.token_ids) ++counts[t];
        for (const auto& [t, n] : counts) {
            index.postings_[t].push_back({ordinal, n});
        }
        index.doc_table_.push_back(doc.id);
        index.doc_len_.push_back(static_cast<std::uint32_t>(seq.size()));
        total_len += static_cast<double>(seq.size());
    }
    index.avgdl_ = index.doc_len_.empty() ? 0.0 : total_len / static_cast<double>(index.doc_len_.size());
    index.tokenizer_ = std::move(tokenizer);
    return index;
}

double bm25_idf(std::size_t num_docs, std::size_t df) {
    const double n = static_cast<double>(num_docs);
    const double f = static_cast<double>(df);
    return std::log((n - f + 0.5) / (f + 0.5) + 1.0);
}

double bm25_score_pair(const TokenSeq& query, DocOrdinal doc, const Bm25Index& index, const Bm25Params& params) {
    if (doc >= index.num_docs()) {
        throw ValidationError("document ordinal " + std::to_string(doc) + " out of range");
    }
    double score = 0.0;
    for (const auto& [t, tf_q] : query_term_counts(query)) {
        const std::uint32_t tf_d = index.tf(t, doc);
        if (tf_d == 0) {
            continue;
        }
        score += term_weight(index.num_docs(), index.df(t), tf_q, tf_d, static_cast<double>(index.doc_len(doc)),
                             index.avgdl(), params);
    }
    return score;
}

RankedList bm25_search(const Bm25Index& index, std::string query_id, const TokenSeq& query, std::size_t k,
                       const Bm25Params& params) {
    if (k < 1) {
        throw ValidationError("k must be ≥ 1");
    }
    validate_bm25_params(params);
    std::vector<double> acc(index.num_docs(), 0.0);
    std::vector<char> hit(index.num_docs(), 0);
    // Term-at-a-time in ascending token id order, matching bm25_score_pair.
    for (const auto& [t, tf_q] : query_term_counts(query)) {
        const auto list = index.postings(t);
        for (const Posting& p : list) {
            acc[p.doc] += term_weight(index.num_docs(), list.size(), tf_q, p.tf,
                                      static_cast<double>(index.doc_len(p.doc)), index.avgdl(), params);
            hit[p.doc] = 1;
        }
    }
    std::vector<ScoredDoc> entries;
    for (std::size_t d = 0; d < acc.size(); ++d) {
        if (hit[d]) {
            entries.push_back({index.doc_id(static_cast<DocOrdinal>(d)), static_cast<float>(acc[d])});
        }
    }
    return make_ranked_list(std::move(query_id), std::move(entries), k);
}

RankedList bm25_search(const Bm25Index& index, const Query& query, std::size_t k, const Bm25Params& params) {
    return bm25_search(index, query.id, index.tokenize_query(query.text), k, params);
}

std::vector<std::string> sample_bm25_negatives(const Bm25Index& index, const Query& query,
                                               const std::unordered_set<std::string>& positive_ids,
                                               std::size_t depth, std::size_t count, std::uint64_t seed,
                                               const Bm25Params& params) {
    if (depth < count) {
        throw ValidationError("sampling depth must be ≥ count");
    }
    if (depth == 0) {
        return {};
    }
    const RankedList top = bm25_search(index, query, depth, params);
    std::vector<std::string> pool;
    for (const auto& e : top.entries) {
        if (positive_ids.count(e.doc_id) == 0) {
            pool.push_back(e.doc_id);
        }
    }
    if (pool.size() <= count) {
        return pool;
    }
    // Partial Fisher-Yates: the first `count` slots become a uniform sample.
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace coil
