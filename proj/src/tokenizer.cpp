#include "coil/tokenizer.hpp"

#include <cstdint>

#include "coil/errors.hpp"

namespace coil {

namespace {

bool is_unicode_space(std::uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

/// Decodes one code point at `pos`. Invalid sequences decode as a single
/// non-space byte so arbitrary bytes still tokenize.
std::uint32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    auto cont = [&](std::size_t i) -> int {
        if (pos + i >= s.size()) {
            return -1;
        }
        const auto b = static_cast<unsigned char>(s[pos + i]);
        return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
    };
    len = 1;
    if (b0 < 0x80) {
        return b0;
    }
    int need = 0;
    std::uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3;
        cp = b0 & 0x07;
    } else {
        return 0xFFFD;
    }
    for (int i = 1; i <= need; ++i) {
        const int c = cont(static_cast<std::size_t>(i));
        if (c < 0) {
            return 0xFFFD;
        }
        cp = (cp << 6) | static_cast<std::uint32_t>(c);
    }
    len = static_cast<std::size_t>(need) + 1;
    return cp;
}

bool is_ascii_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= 0x21 && u <= 0x2F) || (u >= 0x3A && u <= 0x40) || (u >= 0x5B && u <= 0x60) ||
           (u >= 0x7B && u <= 0x7E);
}

void split_chunk(std::string_view chunk, std::vector<std::string>& out) {
    std::size_t begin = 0;
    std::size_t end = chunk.size();
    while (begin < end && is_ascii_punct(chunk[begin])) {
        out.emplace_back(1, chunk[begin]);
        ++begin;
    }
    std::size_t trail = end;
    while (trail > begin && is_ascii_punct(chunk[trail - 1])) {
        --trail;
    }
    if (trail > begin) {
        out.emplace_back(chunk.substr(begin, trail - begin));
    }
    for (std::size_t i = trail; i < end; ++i) {
        out.emplace_back(1, chunk[i]);
    }
}

}  // namespace

Vocabulary::Vocabulary() : tokens_{std::string{}} {}

TokenId Vocabulary::lookup(std::string_view token) const {
    auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnknownToken : it->second;
}

TokenId Vocabulary::intern(std::string_view token) {
    auto [it, inserted] = ids_.try_emplace(std::string(token), static_cast<TokenId>(tokens_.size()));
    if (inserted) {
        tokens_.emplace_back(token);
    }
    return it->second;
}

const std::string& Vocabulary::token(TokenId id) const {
    if (id >= tokens_.size()) {
        throw ValidationError("token id " + std::to_string(id) + " outside vocabulary");
    }
    return tokens_[id];
}

std::vector<std::string> Vocabulary::tokens() const { return {tokens_.begin() + 1, tokens_.end()}; }

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
    Vocabulary v;
    for (const auto& t : tokens) {
        if (t.empty()) {
            throw ValidationError("vocabulary contains an empty token");
        }
        if (v.lookup(t) != kUnknownToken) {
            throw ValidationError("vocabulary contains duplicate token '" + t + "'");
        }
        v.intern(t);
    }
    return v;
}

std::vector<std::string> Tokenizer::split(std::string_view text) const {
    std::vector<std::string> out;
    std::size_t pos = 0;
    std::size_t chunk_begin = 0;
    bool in_chunk = false;
    while (pos < text.size()) {
        std::size_t len = 1;
        const std::uint32_t cp = decode_utf8(text, pos, len);
        if (is_unicode_space(cp)) {
            if (in_chunk) {
                split_chunk(text.substr(chunk_begin, pos - chunk_begin), out);
                in_chunk = false;
            }
        } else if (!in_chunk) {
            chunk_begin = pos;
            in_chunk = true;
        }
        pos += len;
    }
    if (in_chunk) {
        split_chunk(text.substr(chunk_begin), out);
    }
    if (lowercase_) {
        for (auto& tok : out) {
            for (char& c : tok) {
                if (c >= 'A' && c <= 'Z') {
                    c = static_cast<char>(c - 'A' + 'a');
                }
            }
        }
    }
    return out;
}

TokenSeq Tokenizer::tokenize(std::string_view text) const {
    TokenSeq seq;
    seq.tokens = split(text);
    seq.token_ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) {
        seq.token_ids.push_back(vocab_.lookup(t));
    }
    return seq;
}

TokenSeq Tokenizer::tokenize_and_extend(std::string_view text) {
    TokenSeq seq;
    seq.tokens = split(text);
    seq.token_ids.reserve(seq.tokens.size());
    for (const auto& t : seq.tokens) {
        seq.token_ids.push_back(vocab_.intern(t));
    }
    return seq;
}

}  // namespace coil
