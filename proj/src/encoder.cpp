#include "coil/encoder.hpp"

#include "coil/errors.hpp"
#include "coil/parallel.hpp"

namespace coil {

EncodedSequence encode_tokens(std::string id, const TokenSeq& seq, const StubContextualizer& lm,
                              const ProjectionParams& params, const CoilConfig& config) {
    if (lm.n_lm() != config.n_lm) {
        throw ValidationError("contextualizer n_lm does not match config");
    }
    const LmOutput lm_out = lm.contextualize(seq.token_ids);
    Matrix tok = project_tokens(lm_out.positions, params);

    EncodedSequence out;
    out.id = std::move(id);
    out.token_ids = seq.token_ids;
    out.token_dim = config.n_t;
    out.token_vecs = std::move(tok.data);
    if (config.n_c > 0) {
        out.cls_vec = project_cls(lm_out.cls, params, config.cls_layer_norm);
    }
    return out;
}

EncodedDocument encode_document(const Document& doc, Tokenizer& tokenizer, const StubContextualizer& lm,
                                const ProjectionParams& params, const CoilConfig& config) {
    TokenSeq seq = tokenizer.tokenize_and_extend(doc.text);
    seq.truncate(config.max_doc_tokens);
    return EncodedDocument{encode_tokens(doc.id, seq, lm, params, config)};
}

EncodedQuery encode_query(const Query& query, const Tokenizer& tokenizer, const StubContextualizer& lm,
                          const ProjectionParams& params, const CoilConfig& config) {
    const TokenSeq seq = tokenizer.tokenize(query.text);
    return EncodedQuery{encode_tokens(query.id, seq, lm, params, config)};
}

namespace {

CoilConfig checked(const EncoderSettings& s) {
    validate_config(s.config);
    return s.config;
}

}  // namespace

Encoder::Encoder(EncoderSettings settings, Vocabulary vocab)
    : settings_(settings),
      tokenizer_(settings.lowercase, std::move(vocab)),
      lm_(settings.stub, checked(settings).n_lm),
      params_(make_seeded_params(settings.stub.seed, settings.config)) {}

EncodedDocument Encoder::encode_document(const Document& doc) {
    return coil::encode_document(doc, tokenizer_, lm_, params_, settings_.config);
}

EncodedQuery Encoder::encode_query(const Query& query) const {
    return coil::encode_query(query, tokenizer_, lm_, params_, settings_.config);
}

std::vector<EncodedDocument> Encoder::encode_corpus(std::span<const Document> docs, unsigned threads) {
    std::vector<TokenSeq> seqs;
    seqs.reserve(docs.size());
    for (const auto& doc : docs) {
        seqs.push_back(tokenizer_.tokenize_and_extend(doc.text));
        seqs.back().truncate(settings_.config.max_doc_tokens);
    }
    std::vector<EncodedDocument> out(docs.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) {
        out[i] = EncodedDocument{encode_tokens(docs[i].id, seqs[i], lm_, params_, settings_.config)};
    });
    return out;
}

std::vector<EncodedQuery> Encoder::encode_queries(std::span<const Query> queries, unsigned threads) const {
    std::vector<EncodedQuery> out(queries.size());
    parallel_for(queries.size(), threads, [&](std::size_t i) { out[i] = encode_query(queries[i]); });
    return out;
}

}  // namespace coil
