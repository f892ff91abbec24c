#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coil/types.hpp"

namespace coil {

/// Bijective token string <-> id mapping. Id 0 is reserved for unknown tokens
/// and is never assigned to a real token.
class Vocabulary {
  public:
    Vocabulary();

    /// Returns the token's id, or kUnknownToken if it was never interned.
    TokenId lookup(std::string_view token) const;

    /// Returns the token's id, assigning the next free id on first sight.
    TokenId intern(std::string_view token);

    /// Surface form of `id`; the empty string for kUnknownToken.
    const std::string& token(TokenId id) const;

    /// Number of assigned ids, including the reserved one.
    std::size_t size() const noexcept { return tokens_.size(); }

    /// Real tokens in id order (id 1 first).
    std::vector<std::string> tokens() const;

    /// Rebuilds a vocabulary from tokens listed in id order starting at id 1.
    static Vocabulary from_tokens(const std::vector<std::string>& tokens);

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> ids_;
};

/// Whitespace + punctuation tokenizer with a corpus-built vocabulary.
///
/// Text is split on Unicode whitespace; each chunk then sheds its leading and
/// trailing ASCII punctuation, one character per token. Lowercasing is ASCII
/// only.
class Tokenizer {
  public:
    Tokenizer() = default;
    explicit Tokenizer(bool lowercase) : lowercase_(lowercase) {}
    Tokenizer(bool lowercase, Vocabulary vocab) : lowercase_(lowercase), vocab_(std::move(vocab)) {}

    /// Surface tokens only; no vocabulary involvement.
    std::vector<std::string> split(std::string_view text) const;

    /// Maps tokens through the frozen vocabulary; unseen tokens get id 0.
    TokenSeq tokenize(std::string_view text) const;

    /// Same as tokenize() but interns unseen tokens. Used on the corpus pass.
    TokenSeq tokenize_and_extend(std::string_view text);

    bool lowercase() const noexcept { return lowercase_; }
    const Vocabulary& vocab() const noexcept { return vocab_; }

  private:
    bool lowercase_ = true;
    Vocabulary vocab_;
};

}  // namespace coil
