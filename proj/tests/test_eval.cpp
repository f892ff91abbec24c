#include <gtest/gtest.h>

#include <cmath>

#include "coil/errors.hpp"
#include "coil/eval.hpp"
#include "test_support.hpp"

namespace coil {
namespace {

RankedList ranking(const std::string& qid, const std::vector<std::string>& docs) {
    RankedList r{qid, {}};
    float score = 10.0F;
    for (const auto& d : docs) r.entries.push_back({d, score--});
    return r;
}

// Five queries: first relevant at ranks 1, 2, 3, none retrieved, and a query missing from the run.
struct Toy {
    coil::Run run;
    Qrels qrels;
    Toy() {
        run["q1"] = ranking("q1", {"d1", "d2", "d3"});
        run["q2"] = ranking("q2", {"d4", "d5", "d6"});
        run["q3"] = ranking("q3", {"d7", "d8", "d9"});
        run["q4"] = ranking("q4", {"a", "b"});
        qrels.add("q1", "d1", 1);
        qrels.add("q2", "d5", 1);
        qrels.add("q3", "d9", 2);
        qrels.add("q3", "d10", 1);
        qrels.add("q4", "z", 1);
        qrels.add("q5", "y", 1);
    }
};

TEST(MetricTest, ToyQuerySet) {
    const Toy t;
    EXPECT_NEAR(mrr_at_k(t.run, t.qrels, 10), (1.0 + 0.5 + 1.0 / 3) / 5, 1e-9);
    EXPECT_NEAR(mrr_at_k(t.run, t.qrels, 2), (1.0 + 0.5) / 5, 1e-9);
    EXPECT_NEAR(recall_at_k(t.run, t.qrels, 10), (1.0 + 1.0 + 0.5) / 5, 1e-9);
    EXPECT_NEAR(recall_at_k(t.run, t.qrels, 2), 2.0 / 5, 1e-9);
    // q3: DCG = 3/log2(4); IDCG = 3 + 1/log2(3).
    const double q3 = 1.5 / (3.0 + 1.0 / std::log2(3.0));
    EXPECT_NEAR(ndcg_at_k(t.run, t.qrels, 10), (1.0 + 1.0 / std::log2(3.0) + q3) / 5, 1e-9);
    EXPECT_NEAR(ndcg_at_k(t.run, t.qrels, 10), 0.40880941642714747, 1e-9);
}

TEST(MetricTest, SingleRelevantAtRankTwo) {
    coil::Run run{{"q", ranking("q", {"x", "rel", "y"})}};
    Qrels qrels;
    qrels.add("q", "rel", 1);
    EXPECT_NEAR(ndcg_at_k(run, qrels, 10), 0.6309, 1e-4);
    EXPECT_NEAR(ndcg_at_k(run, qrels, 10), 0.6309297535714575, 1e-12);
    EXPECT_DOUBLE_EQ(mrr_at_k(run, qrels, 10), 0.5);
}

TEST(MetricTest, SimpleCases) {
    Qrels qrels;
    qrels.add("q", "a", 1);
    qrels.add("q", "b", 1);
    coil::Run perfect{{"q", ranking("q", {"a", "b", "c"})}};
    coil::Run half{{"q", ranking("q", {"a", "c"})}};
    coil::Run none{{"q", ranking("q", {"c", "d"})}};
    EXPECT_DOUBLE_EQ(ndcg_at_k(perfect, qrels, 10), 1.0);
    EXPECT_DOUBLE_EQ(recall_at_k(perfect, qrels, 10), 1.0);
    EXPECT_DOUBLE_EQ(recall_at_k(half, qrels, 10), 0.5);
    EXPECT_DOUBLE_EQ(recall_at_k(none, qrels, 10), 0.0);
    EXPECT_DOUBLE_EQ(mrr_at_k(none, qrels, 10), 0.0);
    EXPECT_DOUBLE_EQ(ndcg_at_k(none, qrels, 10), 0.0);
}

TEST(MetricTest, NdcgSkipsQueriesWithoutRelevantDocs) {
    Qrels qrels;
    qrels.add("q1", "a", 1);
    qrels.add("q2", "b", 0);
    coil::Run run{{"q1", ranking("q1", {"a"})}, {"q2", ranking("q2", {"b"})}};
    EXPECT_DOUBLE_EQ(ndcg_at_k(run, qrels, 10), 1.0);
}

TEST(MetricTest, MinRelThreshold) {
    Qrels qrels;
    qrels.add("q", "a", 1);
    qrels.add("q", "b", 2);
    coil::Run run{{"q", ranking("q", {"a", "b"})}};
    EXPECT_DOUBLE_EQ(mrr_at_k(run, qrels, 10, 1), 1.0);
    EXPECT_DOUBLE_EQ(mrr_at_k(run, qrels, 10, 2), 0.5);
}

TEST(MetricTest, ImprovingARankNeverHurts) {
    Qrels qrels;
    qrels.add("q", "r1", 2);
    qrels.add("q", "r2", 1);
    std::vector<std::string> docs = {"n1", "n2", "r1", "n3", "r2", "n4"};
    double prev_mrr = -1, prev_ndcg = -1;
    // Bubble the relevant docs towards the top one step at a time.
    for (int step = 0; step < 6; ++step) {
        coil::Run run{{"q", ranking("q", docs)}};
        const double m = mrr_at_k(run, qrels, 10), n = ndcg_at_k(run, qrels, 10);
        EXPECT_GE(m, prev_mrr);
        EXPECT_GE(n, prev_ndcg);
        EXPECT_LE(n, 1.0);
        prev_mrr = m;
        prev_ndcg = n;
        for (std::size_t i = 1; i < docs.size(); ++i) {
            if (docs[i][0] == 'r' && docs[i - 1][0] == 'n') {
                std::swap(docs[i], docs[i - 1]);
                break;
            }
        }
    }
}

TEST(MetricTest, Errors) {
    EXPECT_THROW(mrr_at_k({}, {}, 10), ValidationError);
    Qrels qrels;
    qrels.add("q", "a", 1);
    EXPECT_THROW(mrr_at_k({}, qrels, 0), ValidationError);
    EXPECT_THROW(qrels.add("q", "a", 2), ValidationError);
}

TEST(MetricSpecTest, Parsing) {
    const auto m = parse_metric_spec("mrr@10");
    EXPECT_EQ(m.metric, Metric::kMrr);
    EXPECT_EQ(m.k, 10U);
    EXPECT_EQ(parse_metric_spec("NDCG@5").name(), "ndcg@5");
    EXPECT_EQ(parse_metric_spec("recall@1000").metric, Metric::kRecall);
    for (const char* bad : {"mrr", "mrr@", "mrr@0", "map@10", "mrr@x"}) {
        EXPECT_THROW(parse_metric_spec(bad), ValidationError) << bad;
    }
}

TEST(MetricSpecTest, EvaluateDelegates) {
    const Toy t;
    const auto report = evaluate(t.run, t.qrels, {parse_metric_spec("mrr@10"), parse_metric_spec("ndcg@10")});
    ASSERT_EQ(report.size(), 2U);
    EXPECT_EQ(report[0].name, "mrr@10");
    EXPECT_DOUBLE_EQ(report[0].value, mrr_at_k(t.run, t.qrels, 10));
    EXPECT_DOUBLE_EQ(report[1].value, ndcg_at_k(t.run, t.qrels, 10));
    EXPECT_EQ(format_report({{"mrr@10", 0.5}}), "mrr@10 all 0.500000\n");
}

TEST(TrecIoTest, RunFormat) {
    coil::Run run{{"q1", RankedList{"q1", {{"d2", 1.5F}, {"d1", 0.123456789F}}}}};
    EXPECT_EQ(format_run(run, "tok"), "q1 Q0 d2 1 1.5 tok\nq1 Q0 d1 2 0.123457 tok\n");
}

TEST(TrecIoTest, RoundtripPreservesMetrics) {
    coil::testing::TempDir dir;
    const Toy t;
    write_run(t.run, dir.file("run.txt"), "full");
    write_qrels(t.qrels, dir.file("qrels.txt"));
    const auto run = read_run(dir.file("run.txt"));
    const auto qrels = read_qrels(dir.file("qrels.txt"));
    EXPECT_EQ(qrels.judgments, t.qrels.judgments);
    ASSERT_EQ(run.size(), t.run.size());
    for (const auto& [qid, list] : t.run) EXPECT_EQ(run.at(qid), list);
    EXPECT_EQ(mrr_at_k(run, qrels, 10), mrr_at_k(t.run, t.qrels, 10));
    EXPECT_EQ(ndcg_at_k(run, qrels, 10), ndcg_at_k(t.run, t.qrels, 10));
}

TEST(TrecIoTest, MalformedLinesNameTheLine) {
    coil::testing::TempDir dir;
    coil::testing::spit(dir.file("q.txt"), "q1 0 d1 1\nq1 0 d2\n");
    try {
        read_qrels(dir.file("q.txt"));
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2U);
    }
    coil::testing::spit(dir.file("r.txt"), "q1 Q0 d1 1 0.5 t\nq1 Q0 d2 2 0.4 t\nq1 Q0 d3 x 0.3 t\n");
    try {
        read_run(dir.file("r.txt"));
        FAIL();
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 3U);
    }
    coil::testing::spit(dir.file("neg.txt"), "q1 0 d1 -1\n");
    EXPECT_THROW(read_qrels(dir.file("neg.txt")), FormatError);
}

TEST(TrecIoTest, EmptyFilesGiveEmptyStructures) {
    coil::testing::TempDir dir;
    coil::testing::spit(dir.file("empty"), "");
    EXPECT_TRUE(read_qrels(dir.file("empty")).empty());
    EXPECT_TRUE(read_run(dir.file("empty")).empty());
    EXPECT_THROW(read_run(dir.file("missing")), IoError);
}

}  // namespace
}  // namespace coil
