#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace coil {

/// Incremental 64-bit FNV-1a.
class Fnv1a64 {
  public:
    static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

    void update(std::span<const std::byte> bytes) noexcept {
        for (std::byte b : bytes) {
            state_ ^= static_cast<std::uint64_t>(b);
            state_ *= kPrime;
        }
    }
    void update(std::string_view s) noexcept { update(std::as_bytes(std::span(s.data(), s.size()))); }

    /// Feeds `value` as little-endian bytes regardless of host byte order.
    void update_u64(std::uint64_t value) noexcept { update_le(value, 8); }
    void update_u32(std::uint32_t value) noexcept { update_le(value, 4); }

    std::uint64_t digest() const noexcept { return state_; }

  private:
    void update_le(std::uint64_t value, int width) noexcept {
        for (int i = 0; i < width; ++i) {
            state_ ^= (value >> (8 * i)) & 0xffU;
            state_ *= kPrime;
        }
    }

    std::uint64_t state_ = kOffsetBasis;
};

inline std::uint64_t fnv1a64(std::span<const std::byte> bytes) noexcept {
    Fnv1a64 h;
    h.update(bytes);
    return h.digest();
}

/// Seed for token `token`'s base vector: FNV-1a over the seed's 8 bytes then
/// the token id's 4 bytes, both little-endian.
inline std::uint64_t hash64(std::uint64_t seed, std::uint32_t token) noexcept {
    Fnv1a64 h;
    h.update_u64(seed);
    h.update_u32(token);
    return h.digest();
}

/// SplitMix64 (Steele, Lea, Flood). Counter based, so the output is fully
/// determined by the seed on every platform.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double next_symmetric() noexcept { return 2.0 * next_unit() - 1.0; }

    /// Uniform integer in [0, bound) without modulo bias. `bound` must be > 0.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = (~std::uint64_t{0} / bound) * bound;
        std::uint64_t x = 0;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::uint64_t state_;
};

}  // namespace coil
