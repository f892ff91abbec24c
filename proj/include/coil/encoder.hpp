#pragma once

#include <span>
#include <vector>

#include "coil/config.hpp"
#include "coil/contextualizer.hpp"
#include "coil/projection.hpp"
#include "coil/tokenizer.hpp"
#include "coil/types.hpp"

namespace coil {

/// Contextualize and project an already tokenized sequence. No truncation.
EncodedSequence encode_tokens(std::string id, const TokenSeq& seq, const StubContextualizer& lm,
                              const ProjectionParams& params, const CoilConfig& config);

/// tokenize (extending the vocabulary) -> truncate to max_doc_tokens ->
/// contextualize -> project.
EncodedDocument encode_document(const Document& doc, Tokenizer& tokenizer, const StubContextualizer& lm,
                                const ProjectionParams& params, const CoilConfig& config);

/// Like encode_document against a frozen vocabulary and without truncation.
EncodedQuery encode_query(const Query& query, const Tokenizer& tokenizer, const StubContextualizer& lm,
                          const ProjectionParams& params, const CoilConfig& config);

/// Everything needed to reproduce an encoding run.
struct EncoderSettings {
    CoilConfig config;
    StubContextualizerConfig stub;
    bool lowercase = true;

    friend bool operator==(const EncoderSettings&, const EncoderSettings&) = default;
};

/// Tokenizer, stub LM and seeded projections bundled behind one config.
/// Projection parameters are seeded with the stub seed.
class Encoder {
  public:
    explicit Encoder(EncoderSettings settings, Vocabulary vocab = {});

    EncodedDocument encode_document(const Document& doc);
    EncodedQuery encode_query(const Query& query) const;

    /// Builds the vocabulary sequentially over `docs`, then encodes on up to
    /// `threads` threads. Output order equals input order.
    std::vector<EncodedDocument> encode_corpus(std::span<const Document> docs, unsigned threads = 1);
    std::vector<EncodedQuery> encode_queries(std::span<const Query> queries, unsigned threads = 1) const;

    const EncoderSettings& settings() const noexcept { return settings_; }
    const Tokenizer& tokenizer() const noexcept { return tokenizer_; }
    const ProjectionParams& params() const noexcept { return params_; }
    const StubContextualizer& contextualizer() const noexcept { return lm_; }

  private:
    EncoderSettings settings_;
    Tokenizer tokenizer_;
    StubContextualizer lm_;
    ProjectionParams params_;
};

}  // namespace coil
