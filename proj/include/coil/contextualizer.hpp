#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coil/linalg.hpp"
#include "coil/types.hpp"

namespace coil {

struct StubContextualizerConfig {
    std::uint64_t seed = 0;
    std::size_t window = 2;
    double mix_weight = 0.5;

    friend bool operator==(const StubContextualizerConfig&, const StubContextualizerConfig&) = default;
};

/// Output of a contextualizer: one n_lm vector per position plus the CLS slot.
struct LmOutput {
    Matrix positions;  // m x n_lm
    std::vector<float> cls;
};

/// Deterministic stand-in for a fine-tuned language model.
///
/// Each token id owns a fixed unit "base" vector drawn from SplitMix64 seeded
/// with hash64(seed, id). Position i outputs the normalized blend
///   (1 - mix) * base_i + mix * mean(base_j : j != i, |j - i| <= window)
/// so the same token gets different vectors under different neighbours. The
/// CLS slot is the normalized mean of all position outputs (zero for an empty
/// sequence). Arithmetic is double precision with a fixed evaluation order,
/// which makes the output bitwise reproducible.
class StubContextualizer {
  public:
    StubContextualizer(StubContextualizerConfig config, std::size_t n_lm);

    LmOutput contextualize(std::span<const TokenId> token_ids) const;

    /// The position-independent base vector of `token`.
    std::vector<double> base_vector(TokenId token) const;

    std::size_t n_lm() const noexcept { return n_lm_; }
    const StubContextualizerConfig& config() const noexcept { return config_; }

  private:
    StubContextualizerConfig config_;
    std::size_t n_lm_;
};

}  // namespace coil
