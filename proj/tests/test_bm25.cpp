#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "coil/bm25.hpp"
#include "coil/errors.hpp"
#include "test_support.hpp"

namespace coil {
namespace {

Bm25Index toy_index() {
    const std::vector<Document> docs = {{"d1", "a b a"}, {"d2", "b c"}};
    return build_bm25_index(docs);
}

TEST(Bm25IndexTest, ToyStatistics) {
    const auto index = toy_index();
    const auto& vocab = index.tokenizer().vocab();
    const TokenId a = vocab.lookup("a"), b = vocab.lookup("b"), c = vocab.lookup("c");
    EXPECT_EQ(index.num_docs(), 2U);
    EXPECT_EQ(index.df(a), 1U);
    EXPECT_EQ(index.df(b), 2U);
    EXPECT_EQ(index.df(c), 1U);
    EXPECT_DOUBLE_EQ(index.avgdl(), 2.5);
    EXPECT_EQ(index.tf(a, 0), 2U);
    EXPECT_EQ(index.tf(a, 1), 0U);
    EXPECT_EQ(index.doc_len(0), 3U);
    EXPECT_EQ(index.doc_id(1), "d2");
    EXPECT_EQ(index.postings(b).size(), 2U);
}

TEST(Bm25IndexTest, EmptyCorpus) {
    const auto index = build_bm25_index({});
    EXPECT_EQ(index.num_docs(), 0U);
    EXPECT_EQ(index.avgdl(), 0.0);
    EXPECT_EQ(index.df(1), 0U);
    EXPECT_TRUE(index.postings(1).empty());
    EXPECT_TRUE(bm25_search(index, Query{"q", "anything"}, 10, {}).entries.empty());
}

TEST(Bm25IndexTest, TfSumEqualsTokenCount) {
    std::mt19937_64 rng(1);
    const auto docs = coil::testing::random_corpus(rng, 80, 30, 25);
    std::size_t tokens = 0;
    for (const auto& d : docs) tokens += std::min<std::size_t>(Tokenizer().split(d.text).size(), 20);
    const auto index = build_bm25_index(docs, Tokenizer{}, 20);
    std::size_t sum = 0;
    for (TokenId t = 1; t < index.tokenizer().vocab().size(); ++t) {
        EXPECT_EQ(index.df(t), index.postings(t).size());
        for (const auto& p : index.postings(t)) {
            EXPECT_GE(p.tf, 1U);
            sum += p.tf;
        }
    }
    EXPECT_EQ(sum, tokens);
}

TEST(Bm25IndexTest, DuplicateIdRejected) {
    const std::vector<Document> docs = {{"x", "a"}, {"x", "b"}};
    EXPECT_THROW(build_bm25_index(docs), ValidationError);
}

TEST(Bm25ScoreTest, HandExample) {
    const auto index = toy_index();
    const auto q = index.tokenize_query("a");
    EXPECT_NEAR(bm25_idf(2, 1), std::log(2.0), 1e-15);
    EXPECT_NEAR(bm25_score_pair(q, 0, index, {1.2, 0.75, 0.0}), 0.902321773509988, 1e-6);
    EXPECT_EQ(bm25_score_pair(q, 1, index, {1.2, 0.75, 0.0}), 0.0);
}

TEST(Bm25ScoreTest, ZeroK2MakesQueryTfIrrelevant) {
    const auto index = toy_index();
    EXPECT_DOUBLE_EQ(bm25_score_pair(index.tokenize_query("a a a"), 0, index, {}),
                     bm25_score_pair(index.tokenize_query("a"), 0, index, {}));
    // With k2 > 0 repeated query terms weigh more.
    const Bm25Params p{1.2, 0.75, 5.0};
    EXPECT_GT(bm25_score_pair(index.tokenize_query("a a"), 0, index, p),
              bm25_score_pair(index.tokenize_query("a"), 0, index, p));
}

TEST(Bm25ScoreTest, InvalidOrdinalAndParams) {
    const auto index = toy_index();
    EXPECT_THROW(bm25_score_pair(index.tokenize_query("a"), 2, index, {}), ValidationError);
    EXPECT_THROW(validate_bm25_params({-1, 0.5, 0}), ValidationError);
    EXPECT_THROW(validate_bm25_params({1, 1.5, 0}), ValidationError);
    EXPECT_THROW(validate_bm25_params({1, 0.5, NAN}), ValidationError);
}

// h_d for a single-term query is score / idf.
double doc_weight(std::size_t tf, std::size_t other_len, const Bm25Params& p) {
    std::string text;
    for (std::size_t i = 0; i < tf; ++i) text += "t ";
    for (std::size_t i = 0; i < other_len; ++i) text += "x ";
    const std::vector<Document> docs = {{"target", text}, {"a", "y z"}, {"b", "y y y y"}};
    const auto index = build_bm25_index(docs);
    return bm25_score_pair(index.tokenize_query("t"), 0, index, p) / bm25_idf(3, 1);
}

TEST(Bm25ScoreTest, DocWeightIncreasingAndBounded) {
    const Bm25Params p;
    double prev = 0;
    for (std::size_t tf = 1; tf <= 40; ++tf) {
        const double h = doc_weight(tf, 5, p);
        EXPECT_GT(h, prev);
        EXPECT_LT(h, 1 + p.k1);
        prev = h;
    }
}

TEST(Bm25ScoreTest, NoLengthDependenceWhenBIsZero) {
    const Bm25Params p{1.2, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(doc_weight(2, 0, p), doc_weight(2, 30, p));
    EXPECT_NE(doc_weight(2, 0, Bm25Params{}), doc_weight(2, 30, Bm25Params{}));
}

TEST(Bm25SearchTest, MatchesExhaustiveScoring) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto docs = coil::testing::random_corpus(rng, 100, 40, 15);
        const auto index = build_bm25_index(docs);
        for (const auto& q : coil::testing::random_queries(rng, 5, 40, 4)) {
            const auto seq = index.tokenize_query(q.text);
            std::vector<ScoredDoc> all;
            for (DocOrdinal d = 0; d < index.num_docs(); ++d) {
                bool overlap = false;
                for (TokenId t : seq.token_ids) overlap |= t != kUnknownToken && index.tf(t, d) > 0;
                if (overlap) all.push_back({index.doc_id(d), static_cast<float>(bm25_score_pair(seq, d, index, {}))});
            }
            EXPECT_EQ(bm25_search(index, q, 10, {}), make_ranked_list(q.id, all, 10));
        }
    }
}

TEST(Bm25SearchTest, SmallCases) {
    const auto index = toy_index();
    EXPECT_TRUE(bm25_search(index, Query{"q", "zzz"}, 5, {}).entries.empty());
    const auto r = bm25_search(index, Query{"q", "c"}, 5, {});
    ASSERT_EQ(r.entries.size(), 1U);
    EXPECT_EQ(r.entries[0].doc_id, "d2");
    EXPECT_THROW(bm25_search(index, Query{"q", "c"}, 0, {}), ValidationError);
}

class NegativeSamplingTest : public ::testing::Test {
  protected:
    void SetUp() override {
        std::mt19937_64 rng(3);
        docs = coil::testing::random_corpus(rng, 300, 10, 10);
        index = build_bm25_index(docs);
    }
    std::vector<Document> docs;
    Bm25Index index;
};

TEST_F(NegativeSamplingTest, ExcludesPositivesAndIsDistinct) {
    const Query q{"q", "w1 w2 w3"};
    const auto top = bm25_search(index, q, 50, {});
    std::unordered_set<std::string> positives = {top.entries[0].doc_id, top.entries[3].doc_id};
    std::unordered_set<std::string> top_ids;
    for (const auto& e : top.entries) top_ids.insert(e.doc_id);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto negs = sample_bm25_negatives(index, q, positives, 50, 7, seed);
        ASSERT_EQ(negs.size(), 7U);
        std::unordered_set<std::string> uniq(negs.begin(), negs.end());
        EXPECT_EQ(uniq.size(), 7U);
        for (const auto& n : negs) {
            EXPECT_FALSE(positives.count(n));
            EXPECT_TRUE(top_ids.count(n));
        }
    }
}

TEST_F(NegativeSamplingTest, SeedDeterminism) {
    const Query q{"q", "w4 w5"};
    EXPECT_EQ(sample_bm25_negatives(index, q, {}, 100, 7, 42), sample_bm25_negatives(index, q, {}, 100, 7, 42));
    EXPECT_NE(sample_bm25_negatives(index, q, {}, 100, 7, 42), sample_bm25_negatives(index, q, {}, 100, 7, 43));
}

TEST_F(NegativeSamplingTest, FewCandidatesReturnsAll) {
    const std::vector<Document> small = {{"a", "x"}, {"b", "x y"}, {"c", "z"}};
    const auto idx = build_bm25_index(small);
    auto negs = sample_bm25_negatives(idx, Query{"q", "x"}, {"a"}, 1000, 7, 0);
    EXPECT_EQ(negs, std::vector<std::string>{"b"});
    EXPECT_THROW(sample_bm25_negatives(idx, Query{"q", "x"}, {}, 3, 7, 0), ValidationError);
}

}  // namespace
}  // namespace coil
