#include "coil/contextualizer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "coil/errors.hpp"
#include "coil/hash.hpp"

namespace coil {

namespace {

void normalize_in_place(std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) {
        sq += x * x;
    }
    if (sq == 0.0) {
        return;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) {
        x *= inv;
    }
}

}  // namespace

StubContextualizer::StubContextualizer(StubContextualizerConfig config, std::size_t n_lm)
    : config_(config), n_lm_(n_lm) {
    if (n_lm_ < 1) {
        throw ValidationError("contextualizer requires n_lm ≥ 1");
    }
    if (!(config_.mix_weight >= 0.0 && config_.mix_weight <= 1.0)) {
        throw ValidationError("mix_weight must lie in [0, 1]");
    }
}

std::vector<double> StubContextualizer::base_vector(TokenId token) const {
    SplitMix64 rng(hash64(config_.seed, token));
    std::vector<double> v(n_lm_);
    for (double& x : v) {
        x = rng.next_symmetric();
    }
    normalize_in_place(v);
    return v;
}

LmOutput StubContextualizer::contextualize(std::span<const TokenId> token_ids) const {
    const std::size_t m = token_ids.size();
    LmOutput out{Matrix(m, n_lm_), std::vector<float>(n_lm_, 0.0F)};
    if (m == 0) {
        return out;
    }

    std::unordered_map<TokenId, std::vector<double>> cache;
    std::vector<const std::vector<double>*> base(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto it = cache.find(token_ids[i]);
        if (it == cache.end()) {
            it = cache.emplace(token_ids[i], base_vector(token_ids[i])).first;
        }
        base[i] = &it->second;
    }

    const double w = config_.mix_weight;
    const std::size_t win = config_.window;
    std::vector<double> cls_sum(n_lm_, 0.0);
    std::vector<double> mixed(n_lm_);
    std::vector<double> neighbours(n_lm_);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i >= win ? i - win : 0;
        const std::size_t hi = std::min(m - 1, i + win);
        const std::size_t count = hi - lo;  // neighbours exclude i itself
        if (w == 0.0 || count == 0) {
            mixed = *base[i];
        } else {
            std::fill(neighbours.begin(), neighbours.end(), 0.0);
            for (std::size_t j = lo; j <= hi; ++j) {
                if (j == i) {
                    continue;
                }
                for (std::size_t k = 0; k < n_lm_; ++k) {
                    neighbours[k] += (*base[j])[k];
                }
            }
            const double inv = 1.0 / static_cast<double>(count);
            for (std::size_t k = 0; k < n_lm_; ++k) {
                mixed[k] = (1.0 - w) * (*base[i])[k] + w * (neighbours[k] * inv);
            }
            normalize_in_place(mixed);
        }
        auto row = out.positions.row(i);
        for (std::size_t k = 0; k < n_lm_; ++k) {
            row[k] = static_cast<float>(mixed[k]);
            cls_sum[k] += mixed[k];
        }
    }

    const double inv_m = 1.0 / static_cast<double>(m);
    for (double& x : cls_sum) {
        x *= inv_m;
    }
    normalize_in_place(cls_sum);
    for (std::size_t k = 0; k < n_lm_; ++k) {
        out.cls[k] = static_cast<float>(cls_sum[k]);
    }
    return out;
}

}  // namespace coil
