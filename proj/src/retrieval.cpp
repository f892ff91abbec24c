#include "coil/retrieval.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_set>

#include "coil/errors.hpp"
#include "coil/linalg.hpp"
#include "coil/parallel.hpp"

namespace coil {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_token_dims(const EncodedSequence& q, const EncodedSequence& d) {
    if (q.size() > 0 && d.size() > 0 && q.token_dim != d.token_dim) {
        throw ValidationError("token dimension mismatch: query n_t=" + std::to_string(q.token_dim) +
                              ", document n_t=" + std::to_string(d.token_dim));
    }
}

void check_cls_dims(const EncodedSequence& q, const EncodedSequence& d) {
    if (!q.has_cls() || !d.has_cls()) {
        throw ValidationError("CLS scoring requires n_c ≥ 1 on both query and document");
    }
    if (q.cls_vec.size() != d.cls_vec.size()) {
        throw ValidationError("CLS dimension mismatch: query n_c=" + std::to_string(q.cls_vec.size()) +
                              ", document n_c=" + std::to_string(d.cls_vec.size()));
    }
}

/// Per-document maxima of one query position over one inverted list, in
/// ascending ordinal order.
using PositionMaxima = std::vector<std::pair<DocOrdinal, double>>;

/// One matrix-vector product per query position followed by a single-pass
/// segmented max. Columns are grouped by ordinal, so each document's
/// occurrences are contiguous.
void score_list(const InvertedList& list, std::span<const std::span<const float>> query_vecs,
                std::span<PositionMaxima> out) {
    const std::size_t positions = query_vecs.size();
    std::vector<double> running(positions, kNegInf);
    DocOrdinal current = list.doc_refs.empty() ? 0 : list.doc_refs.front();
    for (std::size_t c = 0; c < list.size(); ++c) {
        const DocOrdinal doc = list.doc_refs[c];
        if (doc != current) {
            for (std::size_t p = 0; p < positions; ++p) {
                out[p].emplace_back(current, running[p]);
                running[p] = kNegInf;
            }
            current = doc;
        }
        const auto col = list.column(c);
        for (std::size_t p = 0; p < positions; ++p) {
            const double s = dot(col, query_vecs[p]);
            if (s > running[p]) {
                running[p] = s;
            }
        }
    }
    if (list.size() > 0) {
        for (std::size_t p = 0; p < positions; ++p) {
            out[p].emplace_back(current, running[p]);
        }
    }
}

}  // namespace

bool has_token_overlap(const EncodedSequence& q, const EncodedSequence& d) {
    std::unordered_set<TokenId> doc_tokens(d.token_ids.begin(), d.token_ids.end());
    return std::any_of(q.token_ids.begin(), q.token_ids.end(),
                       [&](TokenId t) { return t != kUnknownToken && doc_tokens.count(t) > 0; });
}

double score_tok_pair(const EncodedSequence& q, const EncodedSequence& d) {
    check_token_dims(q, d);
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const TokenId t = q.token_ids[i];
        if (t == kUnknownToken) {
            continue;
        }
        double best = kNegInf;
        bool matched = false;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d.token_ids[j] != t) {
                continue;
            }
            matched = true;
            const double s = dot(q.token_vec(i), d.token_vec(j));
            if (s > best) {
                best = s;
            }
        }
        if (matched) {
            total += best;
        }
    }
    return total;
}

double score_cls_pair(const EncodedSequence& q, const EncodedSequence& d) {
    check_cls_dims(q, d);
    return dot(q.cls_vec, d.cls_vec);
}

double score_full_pair(const EncodedSequence& q, const EncodedSequence& d) {
    check_cls_dims(q, d);
    return score_tok_pair(q, d) + dot(q.cls_vec, d.cls_vec);
}

double score_all_to_all_pair(const EncodedSequence& q, const EncodedSequence& d) {
    check_token_dims(q, d);
    if (q.has_cls() != d.has_cls()) {
        throw ValidationError("all-to-all scoring needs CLS vectors on both sides or neither");
    }
    if (q.has_cls()) {
        check_cls_dims(q, d);
        const bool any_tokens = q.size() > 0 || d.size() > 0;
        const std::size_t n_t = q.size() > 0 ? q.token_dim : d.token_dim;
        if (!any_tokens || n_t != q.cls_vec.size()) {
            throw ValidationError("all-to-all scoring requires n_t = n_c");
        }
    }

    std::vector<std::span<const float>> q_slots;
    std::vector<std::span<const float>> d_slots;
    if (q.has_cls()) {
        q_slots.emplace_back(q.cls_vec);
        d_slots.emplace_back(d.cls_vec);
    }
    for (std::size_t i = 0; i < q.size(); ++i) q_slots.push_back(q.token_vec(i));
    for (std::size_t j = 0; j < d.size(); ++j) d_slots.push_back(d.token_vec(j));

    if (d_slots.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& qs : q_slots) {
        double best = kNegInf;
        for (const auto& ds : d_slots) {
            best = std::max(best, dot(qs, ds));
        }
        total += best;
    }
    return total;
}

SearchResult search(const CoilIndex& index, const EncodedSequence& q, const SearchOptions& options) {
    if (options.k < 1) {
        throw ValidationError("k must be ≥ 1");
    }
    check_mode_supported(options.mode, index.n_t(), index.n_c());
    const bool tokens = uses_tokens(options.mode);
    const bool cls = uses_cls(options.mode);
    if (tokens && q.size() > 0 && (q.token_dim != index.n_t() || q.token_vecs.size() != q.size() * index.n_t())) {
        throw ValidationError("query token dimension " + std::to_string(q.token_dim) + " does not match index n_t=" +
                              std::to_string(index.n_t()));
    }
    if (cls && q.cls_vec.size() != index.n_c()) {
        throw ValidationError("query CLS dimension " + std::to_string(q.cls_vec.size()) +
                              " does not match index n_c=" + std::to_string(index.n_c()));
    }

    const std::size_t num_docs = index.num_docs();
    SearchResult result;
    result.ranking.query_id = q.id;

    std::vector<double> token_scores;
    std::vector<char> candidate;
    if (tokens) {
        // Only the lists of the query's own tokens are visited.
        std::map<TokenId, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const TokenId t = q.token_ids[i];
            if (t != kUnknownToken && index.find_list(t) != nullptr) {
                groups[t].push_back(i);
            }
        }
        std::vector<std::pair<const InvertedList*, const std::vector<std::size_t>*>> work;
        work.reserve(groups.size());
        for (const auto& [t, positions] : groups) {
            work.emplace_back(index.find_list(t), &positions);
        }

        std::vector<PositionMaxima> maxima(q.size());
        parallel_for(work.size(), options.threads, [&](std::size_t w) {
            const auto& [list, positions] = work[w];
            std::vector<std::span<const float>> vecs;
            std::vector<PositionMaxima> local(positions->size());
            for (std::size_t p : *positions) vecs.push_back(q.token_vec(p));
            score_list(*list, vecs, local);
            for (std::size_t i = 0; i < positions->size(); ++i) {
                maxima[(*positions)[i]] = std::move(local[i]);
            }
        });

        // Merge in query-position order so the sum is bitwise stable.
        token_scores.assign(num_docs, 0.0);
        candidate.assign(num_docs, 0);
        for (const auto& per_position : maxima) {
            for (const auto& [doc, best] : per_position) {
                token_scores[doc] += best;
                candidate[doc] = 1;
            }
        }
        result.instrumentation.lists_touched = work.size();
        for (const auto& [list, positions] : work) {
            result.instrumentation.postings_scanned += list->size() * positions->size();
        }
        result.instrumentation.candidates =
            static_cast<std::size_t>(std::count(candidate.begin(), candidate.end(), 1));
    }

    std::vector<std::pair<float, DocOrdinal>> scored;
    if (cls) {
        scored.reserve(num_docs);
        for (std::size_t d = 0; d < num_docs; ++d) {
            const double cls_score = dot(q.cls_vec, index.cls_column(static_cast<DocOrdinal>(d)));
            const double total = tokens ? token_scores[d] + cls_score : cls_score;
            scored.emplace_back(static_cast<float>(total), static_cast<DocOrdinal>(d));
        }
    } else {
        scored.reserve(result.instrumentation.candidates);
        for (std::size_t d = 0; d < num_docs; ++d) {
            if (candidate[d]) {
                scored.emplace_back(static_cast<float>(token_scores[d]), static_cast<DocOrdinal>(d));
            }
        }
    }

    const auto before = [&](const std::pair<float, DocOrdinal>& a, const std::pair<float, DocOrdinal>& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return index.doc_table[a.second] < index.doc_table[b.second];
    };
    const std::size_t keep = std::min(options.k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), before);
    result.ranking.entries.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        result.ranking.entries.push_back({index.doc_table[scored[i].second], scored[i].first});
    }
    return result;
}

std::vector<SearchResult> search_batch(const CoilIndex& index, std::span<const EncodedQuery> queries,
                                       const SearchOptions& options, unsigned threads) {
    std::vector<SearchResult> out(queries.size());
    SearchOptions single = options;
    single.threads = 1;
    parallel_for(queries.size(), threads, [&](std::size_t i) { out[i] = search(index, queries[i], single); });
    return out;
}

RankedList brute_force_search(std::span<const EncodedDocument> docs, const EncodedSequence& q, std::size_t k,
                              Mode mode) {
    if (k < 1) {
        throw ValidationError("k must be ≥ 1");
    }
    std::vector<ScoredDoc> entries;
    for (const auto& d : docs) {
        double score = 0.0;
        switch (mode) {
            case Mode::kTok:
                if (!has_token_overlap(q, d)) {
                    check_token_dims(q, d);
                    continue;
                }
                score = score_tok_pair(q, d);
                break;
            case Mode::kFull:
                score = score_full_pair(q, d);
                break;
            case Mode::kClsOnly:
                score = score_cls_pair(q, d);
                break;
        }
        entries.push_back({d.id, static_cast<float>(score)});
    }
    return make_ranked_list(q.id, std::move(entries), k);
}

}  // namespace coil
