#include "coil/eval.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "coil/errors.hpp"

namespace coil {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        const std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    if (in.bad()) {
        throw IoError("read error on " + path);
    }
    return lines;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write error on " + path);
    }
}

/// Relevant doc ids (rel >= min_rel) per query; queries without any are dropped.
std::map<std::string, std::unordered_set<std::string>> relevant_sets(const Qrels& qrels, int min_rel) {
    std::map<std::string, std::unordered_set<std::string>> out;
    for (const auto& [qid, docs] : qrels.judgments) {
        std::unordered_set<std::string> rel;
        for (const auto& [doc, r] : docs) {
            if (r >= min_rel) rel.insert(doc);
        }
        if (!rel.empty()) out.emplace(qid, std::move(rel));
    }
    return out;
}

const RankedList* find_ranking(const Run& run, const std::string& qid) {
    auto it = run.find(qid);
    return it == run.end() ? nullptr : &it->second;
}

void require_k(std::size_t k) {
    if (k < 1) {
        throw ValidationError("metric cutoff k must be ≥ 1");
    }
}

}  // namespace

int Qrels::relevance(const std::string& qid, const std::string& doc_id) const {
    auto q = judgments.find(qid);
    if (q == judgments.end()) return 0;
    auto d = q->second.find(doc_id);
    return d == q->second.end() ? 0 : d->second;
}

void Qrels::add(const std::string& qid, const std::string& doc_id, int rel) {
    if (rel < 0) {
        throw ValidationError("relevance must be ≥ 0");
    }
    if (!judgments[qid].emplace(doc_id, rel).second) {
        throw ValidationError("duplicate judgment for (" + qid + ", " + doc_id + ")");
    }
}

double mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k, int min_rel) {
    require_k(k);
    if (qrels.empty()) {
        throw ValidationError("mrr requires non-empty qrels");
    }
    const auto relevant = relevant_sets(qrels, min_rel);
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [qid, rel] : relevant) {
        const RankedList* ranking = find_ranking(run, qid);
        if (!ranking) continue;
        const std::size_t depth = std::min(k, ranking->size());
        for (std::size_t r = 0; r < depth; ++r) {
            if (rel.count(ranking->entries[r].doc_id)) {
                sum += 1.0 / static_cast<double>(r + 1);
                break;
            }
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double recall_at_k(const Run& run, const Qrels& qrels, std::size_t k, int min_rel) {
    require_k(k);
    if (qrels.empty()) {
        throw ValidationError("recall requires non-empty qrels");
    }
    const auto relevant = relevant_sets(qrels, min_rel);
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [qid, rel] : relevant) {
        const RankedList* ranking = find_ranking(run, qid);
        if (!ranking) continue;
        const std::size_t depth = std::min(k, ranking->size());
        std::size_t found = 0;
        for (std::size_t r = 0; r < depth; ++r) {
            found += rel.count(ranking->entries[r].doc_id);
        }
        sum += static_cast<double>(found) / static_cast<double>(rel.size());
    }
    return sum / static_cast<double>(relevant.size());
}

double ndcg_at_k(const Run& run, const Qrels& qrels, std::size_t k) {
    require_k(k);
    auto gain = [](int rel) { return std::exp2(static_cast<double>(rel)) - 1.0; };
    auto discount = [](std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); };

    double sum = 0.0;
    std::size_t evaluated = 0;
    for (const auto& [qid, docs] : qrels.judgments) {
        std::vector<int> ideal;
        for (const auto& [doc, r] : docs) {
            if (r > 0) ideal.push_back(r);
        }
        if (ideal.empty()) continue;
        ++evaluated;
        std::sort(ideal.begin(), ideal.end(), std::greater<>());
        double idcg = 0.0;
        for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
            idcg += gain(ideal[i]) * discount(i + 1);
        }
        const RankedList* ranking = find_ranking(run, qid);
        if (!ranking) continue;
        double dcg = 0.0;
        for (std::size_t i = 0; i < std::min(k, ranking->size()); ++i) {
            auto it = docs.find(ranking->entries[i].doc_id);
            if (it != docs.end() && it->second > 0) {
                dcg += gain(it->second) * discount(i + 1);
            }
        }
        sum += dcg / idcg;
    }
    return evaluated == 0 ? 0.0 : sum / static_cast<double>(evaluated);
}

Qrels read_qrels(const std::string& path) {
    Qrels qrels;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.empty()) continue;
        if (fields.size() != 4) {
            throw FormatError(path, i + 1, "expected 4 fields 'qid 0 docid rel', got " + std::to_string(fields.size()));
        }
        int rel = 0;
        if (!parse_int(fields[3], rel) || rel < 0) {
            throw FormatError(path, i + 1, "relevance must be a non-negative integer");
        }
        const std::string qid(fields[0]);
        const std::string doc(fields[2]);
        if (!qrels.judgments[qid].emplace(doc, rel).second) {
            throw FormatError(path, i + 1, "duplicate judgment for (" + qid + ", " + doc + ")");
        }
    }
    return qrels;
}

void write_qrels(const Qrels& qrels, const std::string& path) {
    std::string out;
    for (const auto& [qid, docs] : qrels.judgments) {
        for (const auto& [doc, rel] : docs) {
            out += qid + " 0 " + doc + " " + std::to_string(rel) + "\n";
        }
    }
    write_text(path, out);
}

std::string format_run(const Run& run, std::string_view tag) {
    std::string out;
    char score[32];
    for (const auto& [qid, ranking] : run) {
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            const auto& e = ranking.entries[i];
            std::snprintf(score, sizeof(score), "%.6g", static_cast<double>(e.score));
            out += qid;
            out += " Q0 ";
            out += e.doc_id;
            out += ' ';
            out += std::to_string(i + 1);
            out += ' ';
            out += score;
            out += ' ';
            out += tag;
            out += '\n';
        }
    }
    return out;
}

void write_run(const Run& run, const std::string& path, std::string_view tag) {
    write_text(path, format_run(run, tag));
}

Run read_run(const std::string& path) {
    struct Row {
        std::size_t rank;
        ScoredDoc entry;
    };
    std::map<std::string, std::vector<Row>> rows;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.empty()) continue;
        if (fields.size() != 6) {
            throw FormatError(path, i + 1,
                              "expected 6 fields 'qid Q0 docid rank score tag', got " + std::to_string(fields.size()));
        }
        std::size_t rank = 0;
        if (!parse_int(fields[3], rank) || rank < 1) {
            throw FormatError(path, i + 1, "rank must be a positive integer");
        }
        double score = 0.0;
        const auto res = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), score);
        if (res.ec != std::errc{} || res.ptr != fields[4].data() + fields[4].size() || !std::isfinite(score)) {
            throw FormatError(path, i + 1, "score must be a finite number");
        }
        rows[std::string(fields[0])].push_back({rank, {std::string(fields[2]), static_cast<float>(score)}});
    }
    Run run;
    for (auto& [qid, list] : rows) {
        std::stable_sort(list.begin(), list.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
        RankedList ranking{qid, {}};
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i > 0 && list[i].rank == list[i - 1].rank) {
                throw IoError(path + ": duplicate rank " + std::to_string(list[i].rank) + " for query " + qid);
            }
            if (!seen.insert(list[i].entry.doc_id).second) {
                throw IoError(path + ": duplicate document " + list[i].entry.doc_id + " for query " + qid);
            }
            ranking.entries.push_back(std::move(list[i].entry));
        }
        run.emplace(qid, std::move(ranking));
    }
    return run;
}

std::string MetricSpec::name() const {
    switch (metric) {
        case Metric::kMrr:
            return "mrr@" + std::to_string(k);
        case Metric::kRecall:
            return "recall@" + std::to_string(k);
        case Metric::kNdcg:
            return "ndcg@" + std::to_string(k);
    }
    return "unknown";
}

MetricSpec parse_metric_spec(std::string_view text) {
    const auto at = text.find('@');
    if (at == std::string_view::npos) {
        throw ValidationError("metric '" + std::string(text) + "' must look like name@k");
    }
    std::string name(text.substr(0, at));
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    MetricSpec spec;
    if (name == "mrr") {
        spec.metric = Metric::kMrr;
    } else if (name == "recall") {
        spec.metric = Metric::kRecall;
    } else if (name == "ndcg") {
        spec.metric = Metric::kNdcg;
    } else {
        throw ValidationError("unknown metric '" + name + "' (expected mrr, recall or ndcg)");
    }
    if (!parse_int(text.substr(at + 1), spec.k) || spec.k < 1) {
        throw ValidationError("metric cutoff in '" + std::string(text) + "' must be a positive integer");
    }
    return spec;
}

std::vector<MetricValue> evaluate(const Run& run, const Qrels& qrels, const std::vector<MetricSpec>& metrics) {
    std::vector<MetricValue> report;
    report.reserve(metrics.size());
    for (const auto& m : metrics) {
        double v = 0.0;
        switch (m.metric) {
            case Metric::kMrr:
                v = mrr_at_k(run, qrels, m.k);
                break;
            case Metric::kRecall:
                v = recall_at_k(run, qrels, m.k);
                break;
            case Metric::kNdcg:
                v = ndcg_at_k(run, qrels, m.k);
                break;
        }
        report.push_back({m.name(), v});
    }
    return report;
}

std::string format_report(const std::vector<MetricValue>& report) {
    std::string out;
    char buf[64];
    for (const auto& m : report) {
        std::snprintf(buf, sizeof(buf), " all %.6f\n", m.value);
        out += m.name;
        out += buf;
    }
    return out;
}

}  // namespace coil
