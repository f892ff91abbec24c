#include "coil/loss.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "coil/errors.hpp"
#include "json.hpp"

namespace coil {

double nll_loss(double pos_score, std::span<const double> neg_scores) {
    if (!std::isfinite(pos_score) ||
        !std::all_of(neg_scores.begin(), neg_scores.end(), [](double s) { return std::isfinite(s); })) {
        throw ValidationError("nll_loss requires finite scores");
    }
    if (neg_scores.empty()) {
        return 0.0;
    }
    double shift = pos_score;
    for (double s : neg_scores) shift = std::max(shift, s);
    double sum = std::exp(pos_score - shift);
    for (double s : neg_scores) sum += std::exp(s - shift);
    return std::log(sum) - (pos_score - shift);
}

double batch_loss(const BatchScores& batch) {
    if (batch.num_queries == 0 || batch.group_size == 0) {
        throw ValidationError("batch_loss requires a non-empty batch");
    }
    const std::size_t width = batch.num_queries * batch.group_size;
    if (batch.scores.size() != batch.num_queries * width) {
        throw ValidationError("batch scores must be num_queries x (num_queries * group_size)");
    }
    double total = 0.0;
    std::vector<double> negs;
    negs.reserve(width - 1);
    for (std::size_t q = 0; q < batch.num_queries; ++q) {
        const std::size_t pos_col = q * batch.group_size;
        negs.clear();
        for (std::size_t c = 0; c < width; ++c) {
            if (c != pos_col) {
                negs.push_back(batch.at(q, c));
            }
        }
        total += nll_loss(batch.at(q, pos_col), negs);
    }
    return total / static_cast<double>(batch.num_queries);
}

std::string format_training_example(const TrainingExample& e) {
    nlohmann::ordered_json j;
    j["qid"] = e.query_id;
    j["pos"] = e.positive_doc_id;
    j["negs"] = e.negative_doc_ids;
    return j.dump();
}

void write_training_examples(const std::string& path, std::span<const TrainingExample> examples) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    for (const auto& e : examples) {
        out << format_training_example(e) << '\n';
    }
    if (!out) {
        throw IoError("write error on " + path);
    }
}

std::vector<TrainingExample> read_training_examples(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<TrainingExample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            TrainingExample e{j.at("qid").get<std::string>(), j.at("pos").get<std::string>(),
                              j.at("negs").get<std::vector<std::string>>()};
            if (std::find(e.negative_doc_ids.begin(), e.negative_doc_ids.end(), e.positive_doc_id) !=
                e.negative_doc_ids.end()) {
                throw FormatError(path, line_no, "positive document listed among negatives");
            }
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw FormatError(path, line_no, ex.what());
        }
    }
    return out;
}

}  // namespace coil
