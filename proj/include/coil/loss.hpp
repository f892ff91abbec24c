#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace coil {

struct TrainingExample {
    std::string query_id;
    std::string positive_doc_id;
    std::vector<std::string> negative_doc_ids;
};

/// -log(exp(pos) / (exp(pos) + sum(exp(neg)))), shifted by the max score
/// before exponentiating. Zero when there are no negatives.
double nll_loss(double pos_score, std::span<const double> neg_scores);

/// Scores of a batch of B queries against every document in the batch.
///
/// Each query brings a group of `group_size` documents: its positive followed
/// by its hard negatives. Row q holds query q's scores against all
/// B * group_size documents, groups laid out in query order, so query q's
/// positive sits at column q * group_size.
struct BatchScores {
    std::size_t num_queries = 0;
    std::size_t group_size = 0;
    std::vector<double> scores;

    double at(std::size_t query, std::size_t column) const {
        return scores[query * num_queries * group_size + column];
    }
};

/// Mean nll_loss over queries. Query q's negatives are its own hard negatives
/// plus every other query's positive and negatives (in-batch negatives).
double batch_loss(const BatchScores& batch);

/// Line-delimited `{"qid": ..., "pos": ..., "negs": [...]}`.
std::string format_training_example(const TrainingExample& example);
void write_training_examples(const std::string& path, std::span<const TrainingExample> examples);
std::vector<TrainingExample> read_training_examples(const std::string& path);

}  // namespace coil
