#pragma once

#include <cstddef>
#include <span>

#include "coil/coil_index.hpp"
#include "coil/config.hpp"
#include "coil/types.hpp"

namespace coil {

/// s_tok: for each query position whose token occurs in `d`, the max dot
/// product against that token's occurrences in `d`, summed in position order.
/// Duplicate query tokens each contribute their own max; unknown query tokens
/// (id 0) contribute nothing.
double score_tok_pair(const EncodedSequence& q, const EncodedSequence& d);

/// s_tok + dot(cls_q, cls_d). Requires CLS vectors on both sides.
double score_full_pair(const EncodedSequence& q, const EncodedSequence& d);

double score_cls_pair(const EncodedSequence& q, const EncodedSequence& d);

/// All-to-all late interaction: every query slot [cls; tokens] takes its max
/// dot product over every document slot [cls; tokens]. Requires n_t = n_c when
/// CLS vectors are present; with no CLS on either side only token slots take
/// part. No query expansion tokens.
double score_all_to_all_pair(const EncodedSequence& q, const EncodedSequence& d);

/// True when some non-unknown query token occurs in `d`.
bool has_token_overlap(const EncodedSequence& q, const EncodedSequence& d);

struct SearchInstrumentation {
    std::size_t lists_touched = 0;
    std::size_t postings_scanned = 0;
    std::size_t candidates = 0;

    friend bool operator==(const SearchInstrumentation&, const SearchInstrumentation&) = default;
};

struct SearchOptions {
    std::size_t k = 10;
    Mode mode = Mode::kFull;
    /// Threads used to score distinct query tokens' lists. Results do not depend on it.
    unsigned threads = 1;
};

struct SearchResult {
    RankedList ranking;
    SearchInstrumentation instrumentation;
};

/// Indexed search: one matrix-vector product per (query position, list),
/// segmented max into per-document accumulators, sum over positions, plus the
/// CLS matrix product in full / cls_only modes, then top-k.
///
/// tok mode ranks only documents sharing at least one query token; full and
/// cls_only rank every document.
SearchResult search(const CoilIndex& index, const EncodedSequence& q, const SearchOptions& options);

/// Runs `search` for each query on up to `threads` threads (each query single
/// threaded). Output order equals input order.
std::vector<SearchResult> search_batch(const CoilIndex& index, std::span<const EncodedQuery> queries,
                                       const SearchOptions& options, unsigned threads);

/// Oracle: scores every document with the mode's pairwise scorer.
RankedList brute_force_search(std::span<const EncodedDocument> docs, const EncodedSequence& q, std::size_t k,
                              Mode mode);

}  // namespace coil
