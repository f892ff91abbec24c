#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coil/types.hpp"

namespace coil {

/// query id -> doc id -> graded relevance (>= 0).
struct Qrels {
    std::map<std::string, std::map<std::string, int>> judgments;

    bool empty() const noexcept { return judgments.empty(); }
    /// 0 for unjudged pairs.
    int relevance(const std::string& qid, const std::string& doc_id) const;
    void add(const std::string& qid, const std::string& doc_id, int rel);
};

/// query id -> ranking.
using Run = std::map<std::string, RankedList>;

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k, int min_rel = 1);
double recall_at_k(const Run& run, const Qrels& qrels, std::size_t k, int min_rel = 1);
double ndcg_at_k(const Run& run, const Qrels& qrels, std::size_t k);

/// `qid 0 docid rel` per line.
Qrels read_qrels(const std::string& path);
void write_qrels(const Qrels& qrels, const std::string& path);

/// `qid Q0 docid rank score tag`, rank from 1, score with 6 significant digits.
std::string format_run(const Run& run, std::string_view tag);
void write_run(const Run& run, const std::string& path, std::string_view tag);
Run read_run(const std::string& path);

enum class Metric { kMrr, kRecall, kNdcg };

struct MetricSpec {
    Metric metric = Metric::kMrr;
    std::size_t k = 10;

    std::string name() const;
};

/// Parses `mrr@10`, `recall@1000`, `ndcg@10`.
MetricSpec parse_metric_spec(std::string_view text);

struct MetricValue {
    std::string name;
    double value = 0.0;
};

std::vector<MetricValue> evaluate(const Run& run, const Qrels& qrels, const std::vector<MetricSpec>& metrics);

/// One `name all value` line per metric.
std::string format_report(const std::vector<MetricValue>& report);

}  // namespace coil
