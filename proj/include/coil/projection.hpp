#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coil/config.hpp"
#include "coil/linalg.hpp"

namespace coil {

/// Linear maps from the contextualizer's n_lm space to token (n_t) and
/// CLS (n_c) spaces.
struct ProjectionParams {
    Matrix w_tok;  // n_t x n_lm
    std::vector<float> b_tok;
    Matrix w_cls;  // n_c x n_lm
    std::vector<float> b_cls;

    std::size_t n_lm() const noexcept { return w_tok.rows ? w_tok.cols : w_cls.cols; }
    std::size_t n_t() const noexcept { return w_tok.rows; }
    std::size_t n_c() const noexcept { return w_cls.rows; }
};

/// Throws ValidationError on inconsistent shapes or non-finite entries.
void validate_params(const ProjectionParams& params, const CoilConfig& config);

/// Seeded parameters: every entry uniform in [-1, 1) scaled by 1/sqrt(n_lm).
/// Each of w_tok, b_tok, w_cls, b_cls draws from its own SplitMix64 stream
/// keyed by the seed and the parameter name.
ProjectionParams make_seeded_params(std::uint64_t seed, const CoilConfig& config);

/// output_i = w_tok * input_i + b_tok. `lm_vectors` is m x n_lm; the result is m x n_t.
Matrix project_tokens(const Matrix& lm_vectors, const ProjectionParams& params);

/// v = w_cls * input + b_cls, optionally layer-normalized (no learned scale or
/// shift, epsilon 1e-5). Empty when n_c = 0.
std::vector<float> project_cls(std::span<const float> lm_cls, const ProjectionParams& params,
                               bool cls_layer_norm);

/// (v - mean) / sqrt(population variance + 1e-5)
std::vector<float> layer_norm(std::span<const float> v);

}  // namespace coil
