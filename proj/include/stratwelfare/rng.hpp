#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace stratwelfare {

/// Seeded random stream. Identical (seed, stream id) pairs give identical
/// sequences on every platform: the engine and std::seed_seq are fully
/// specified by the standard, and the distributions below are written out
/// because the std:: distribution algorithms are implementation-defined.
///
/// Not thread-safe; give each concurrent consumer its own stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
        engine_.seed(seq);
    }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
    std::uint64_t uniform_index(std::uint64_t bound) {
        std::uint64_t x = next_u64();
        __uint128_t prod = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                prod = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn cell keys into stream ids.
inline constexpr std::uint64_t hash_text(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Stream id for profile `index` of a cell. Depends only on its arguments,
/// so serial and parallel runs consume identical streams.
inline constexpr std::uint64_t derive_stream(std::uint64_t cell_id, std::uint64_t index) {
    return mix64(cell_id ^ mix64(index));
}

}  // namespace stratwelfare
