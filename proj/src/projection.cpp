#include "coil/projection.hpp"

#include <cmath>
#include <string>

#include "coil/errors.hpp"
#include "coil/hash.hpp"

namespace coil {

namespace {

bool all_finite(std::span<const float> v) {
    for (float x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

void fill_seeded(std::span<float> out, std::uint64_t seed, std::string_view name, double scale) {
    Fnv1a64 h;
    h.update_u64(seed);
    h.update(name);
    SplitMix64 rng(h.digest());
    for (float& x : out) {
        x = static_cast<float>(rng.next_symmetric() * scale);
    }
}

}  // namespace

void validate_params(const ProjectionParams& p, const CoilConfig& config) {
    if (p.w_tok.rows != config.n_t || (config.n_t > 0 && p.w_tok.cols != config.n_lm)) {
        throw ValidationError("w_tok must be n_t x n_lm");
    }
    if (p.b_tok.size() != config.n_t) {
        throw ValidationError("b_tok must have length n_t");
    }
    if (p.w_cls.rows != config.n_c || (config.n_c > 0 && p.w_cls.cols != config.n_lm)) {
        throw ValidationError("w_cls must be n_c x n_lm");
    }
    if (p.b_cls.size() != config.n_c) {
        throw ValidationError("b_cls must have length n_c");
    }
    if (!all_finite(p.w_tok.data) || !all_finite(p.b_tok) || !all_finite(p.w_cls.data) || !all_finite(p.b_cls)) {
        throw ValidationError("projection parameters must be finite");
    }
}

ProjectionParams make_seeded_params(std::uint64_t seed, const CoilConfig& config) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(config.n_lm));
    ProjectionParams p{Matrix(config.n_t, config.n_lm), std::vector<float>(config.n_t),
                       Matrix(config.n_c, config.n_lm), std::vector<float>(config.n_c)};
    fill_seeded(p.w_tok.data, seed, "w_tok", scale);
    fill_seeded(p.b_tok, seed, "b_tok", scale);
    fill_seeded(p.w_cls.data, seed, "w_cls", scale);
    fill_seeded(p.b_cls, seed, "b_cls", scale);
    return p;
}

Matrix project_tokens(const Matrix& lm_vectors, const ProjectionParams& params) {
    const std::size_t n_t = params.n_t();
    Matrix out(lm_vectors.rows, n_t);
    if (lm_vectors.rows == 0 || n_t == 0) {
        return out;
    }
    if (lm_vectors.cols != params.w_tok.cols) {
        throw ValidationError("project_tokens: input dimension " + std::to_string(lm_vectors.cols) +
                              " does not match n_lm " + std::to_string(params.w_tok.cols));
    }
    for (std::size_t i = 0; i < lm_vectors.rows; ++i) {
        const auto in = lm_vectors.row(i);
        auto row = out.row(i);
        for (std::size_t r = 0; r < n_t; ++r) {
            row[r] = static_cast<float>(dot(params.w_tok.row(r), in) + static_cast<double>(params.b_tok[r]));
        }
    }
    return out;
}

std::vector<float> layer_norm(std::span<const float> v) {
    std::vector<float> out(v.size());
    if (v.empty()) {
        return out;
    }
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (float x : v) {
        mean += x;
    }
    mean /= n;
    double var = 0.0;
    for (float x : v) {
        const double d = x - mean;
        var += d * d;
    }
    var /= n;
    const double inv = 1.0 / std::sqrt(var + 1e-5);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = static_cast<float>((v[i] - mean) * inv);
    }
    return out;
}

std::vector<float> project_cls(std::span<const float> lm_cls, const ProjectionParams& params, bool cls_layer_norm) {
    const std::size_t n_c = params.n_c();
    if (n_c == 0) {
        return {};
    }
    if (lm_cls.size() != params.w_cls.cols) {
        throw ValidationError("project_cls: input dimension " + std::to_string(lm_cls.size()) +
                              " does not match n_lm " + std::to_string(params.w_cls.cols));
    }
    std::vector<float> v(n_c);
    for (std::size_t r = 0; r < n_c; ++r) {
        v[r] = static_cast<float>(dot(params.w_cls.row(r), lm_cls) + static_cast<double>(params.b_cls[r]));
    }
    return cls_layer_norm ? layer_norm(v) : v;
}

}  // namespace coil
