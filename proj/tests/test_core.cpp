#include <gtest/gtest.h>

#include <random>

#include "coil/config.hpp"
#include "coil/errors.hpp"
#include "coil/hash.hpp"
#include "coil/tokenizer.hpp"
#include "coil/types.hpp"

namespace coil {
namespace {

std::string config_error(const CoilConfig& c) {
    try {
        validate_config(c);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

TEST(ConfigTest, DefaultsValidate) {
    CoilConfig c;
    EXPECT_EQ(c.n_t, 32U);
    EXPECT_EQ(c.n_c, 768U);
    EXPECT_EQ(c.max_doc_tokens, 512U);
    EXPECT_EQ(&validate_config(c), &c);
}

TEST(ConfigTest, ClsOnlyWithoutTokens) {
    CoilConfig c;
    c.n_t = 0;
    c.n_c = 128;
    c.mode = Mode::kClsOnly;
    EXPECT_NO_THROW(validate_config(c));
}

TEST(ConfigTest, NamedErrors) {
    CoilConfig c;
    c.n_t = 0;
    c.mode = Mode::kTok;
    EXPECT_EQ(config_error(c), "mode=tok requires n_t ≥ 1");

    c = CoilConfig{};
    c.n_c = 0;
    EXPECT_EQ(config_error(c), "mode=full requires n_c ≥ 1");

    c = CoilConfig{};
    c.n_lm = 16;
    EXPECT_EQ(config_error(c), "n_t ≤ n_lm violated");

    c = CoilConfig{};
    c.n_lm = 0;
    EXPECT_EQ(config_error(c), "n_lm must be ≥ 1");
}

TEST(ConfigTest, ValidationIsTotal) {
    // Every combination either validates or throws ValidationError.
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> dim(0, 40);
    for (int i = 0; i < 2000; ++i) {
        CoilConfig c;
        c.n_lm = dim(rng);
        c.n_t = dim(rng);
        c.n_c = dim(rng);
        c.max_doc_tokens = dim(rng);
        c.mode = static_cast<Mode>(i % 3);
        try {
            validate_config(c);
        } catch (const ValidationError&) {
        }
    }
}

TEST(ConfigTest, ModeNames) {
    for (Mode m : {Mode::kTok, Mode::kFull, Mode::kClsOnly}) {
        EXPECT_EQ(parse_mode(mode_name(m)), m);
    }
    EXPECT_THROW(parse_mode("dense"), ValidationError);
}

TEST(RankedListTest, TieRuleIsDocIdAscending) {
    auto list = make_ranked_list("q", {{"b", 1.0F}, {"a", 1.0F}, {"c", 2.0F}, {"aa", 1.0F}}, 10);
    ASSERT_EQ(list.size(), 4U);
    EXPECT_EQ(list.entries[0].doc_id, "c");
    EXPECT_EQ(list.entries[1].doc_id, "a");
    EXPECT_EQ(list.entries[2].doc_id, "aa");
    EXPECT_EQ(list.entries[3].doc_id, "b");
    EXPECT_TRUE(is_well_ordered(list));
}

TEST(RankedListTest, TruncatesToK) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> score(0, 5);
    std::vector<ScoredDoc> entries;
    for (int i = 0; i < 100; ++i) entries.push_back({"d" + std::to_string(i), static_cast<float>(score(rng))});
    auto full = make_ranked_list("q", entries, 1000);
    auto top = make_ranked_list("q", entries, 7);
    ASSERT_EQ(top.size(), 7U);
    EXPECT_TRUE(is_well_ordered(full));
    EXPECT_TRUE(std::equal(top.entries.begin(), top.entries.end(), full.entries.begin()));
}

TEST(RankedListTest, DuplicatesAreNotWellOrdered) {
    RankedList list{"q", {{"a", 2.0F}, {"a", 1.0F}}};
    EXPECT_FALSE(is_well_ordered(list));
}

TEST(IdTest, Whitespace) {
    EXPECT_TRUE(is_valid_id("doc-1"));
    EXPECT_FALSE(is_valid_id(""));
    EXPECT_FALSE(is_valid_id("doc 1"));
    EXPECT_FALSE(is_valid_id("doc\t1"));
}

TEST(HashTest, KnownVectors) {
    auto fnv = [](std::string_view s) { return fnv1a64(std::as_bytes(std::span(s.data(), s.size()))); };
    EXPECT_EQ(fnv(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv("foobar"), 0x85944171f73967e8ULL);

    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(HashTest, Hash64IsFnvOverLittleEndianBytes) {
    const unsigned char bytes[12] = {0x01, 0x02, 0, 0, 0, 0, 0, 0, 0x2a, 0, 0, 0};
    EXPECT_EQ(hash64(0x0201, 42), fnv1a64(std::as_bytes(std::span(bytes))));
}

TEST(HashTest, NextBelowStaysInRange) {
    SplitMix64 rng(9);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LT(rng.next_below(7), 7U);
        const double u = rng.next_symmetric();
        EXPECT_GE(u, -1.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(TokenizerTest, SplitsPunctuationAndLowercases) {
    Tokenizer tok;
    const auto seq = tok.tokenize_and_extend("Cabinet is 20x60.");
    EXPECT_EQ(seq.tokens, (std::vector<std::string>{"cabinet", "is", "20x60", "."}));
    EXPECT_EQ(seq.token_ids.size(), 4U);
}

TEST(TokenizerTest, EmptyText) {
    Tokenizer tok;
    EXPECT_TRUE(tok.tokenize_and_extend("").empty());
    EXPECT_TRUE(tok.tokenize("   \n\t ").empty());
}

TEST(TokenizerTest, RepeatedTokenSharesId) {
    Tokenizer tok;
    const auto seq = tok.tokenize_and_extend("apple  apple");
    EXPECT_EQ(seq.tokens, (std::vector<std::string>{"apple", "apple"}));
    EXPECT_EQ(seq.token_ids[0], seq.token_ids[1]);
    EXPECT_NE(seq.token_ids[0], kUnknownToken);
}

TEST(TokenizerTest, LeadingTrailingAndInnerPunctuation) {
    Tokenizer tok;
    EXPECT_EQ(tok.split("(don't!)"), (std::vector<std::string>{"(", "don't", "!", ")"}));
    EXPECT_EQ(tok.split("..."), (std::vector<std::string>{".", ".", "."}));
    EXPECT_EQ(tok.split("U.S."), (std::vector<std::string>{"u.s", "."}));
}

TEST(TokenizerTest, UnicodeWhitespaceSplits) {
    Tokenizer tok;
    // U+00A0 no-break space, U+3000 ideographic space.
    EXPECT_EQ(tok.split("a\xC2\xA0" "b\xE3\x80\x80" "c"), (std::vector<std::string>{"a", "b", "c"}));
    // Non-ASCII letters are kept as-is.
    EXPECT_EQ(tok.split("Caf\xC3\xA9"), (std::vector<std::string>{"caf\xC3\xA9"}));
}

TEST(TokenizerTest, CaseSensitiveOption) {
    Tokenizer tok(false);
    EXPECT_EQ(tok.split("Apple"), (std::vector<std::string>{"Apple"}));
}

TEST(TokenizerTest, UnknownQueryTokensMapToZero) {
    Tokenizer tok;
    tok.tokenize_and_extend("apple pie");
    const auto q = tok.tokenize("apple juice");
    EXPECT_NE(q.token_ids[0], kUnknownToken);
    EXPECT_EQ(q.token_ids[1], kUnknownToken);
    EXPECT_EQ(tok.vocab().size(), 3U);  // reserved + apple + pie
}

TEST(VocabularyTest, BijectionAndRoundtrip) {
    Vocabulary v;
    EXPECT_EQ(v.intern("x"), 1U);
    EXPECT_EQ(v.intern("y"), 2U);
    EXPECT_EQ(v.intern("x"), 1U);
    EXPECT_EQ(v.token(2), "y");
    EXPECT_EQ(v.lookup("z"), kUnknownToken);
    EXPECT_EQ(Vocabulary::from_tokens(v.tokens()), v);
    EXPECT_THROW(Vocabulary::from_tokens({"a", "a"}), ValidationError);
}

}  // namespace
}  // namespace coil
