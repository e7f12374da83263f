#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lpplab {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011). A block is
// a pure function of (key, counter), which is what makes every weight
// replayable from (seed, coordinates) with no generator state.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::uint64_t key,
                                              std::uint64_t ctr_lo,
                                              std::uint64_t ctr_hi) {
        std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
        std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
        std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        return {c0, c1, c2, c3};
    }

    // Two independent 64-bit words per block.
    static std::array<std::uint64_t, 2> block64(std::uint64_t key,
                                                std::uint64_t ctr_lo,
                                                std::uint64_t ctr_hi) {
        const auto b = block(key, ctr_lo, ctr_hi);
        return {static_cast<std::uint64_t>(b[0]) | (static_cast<std::uint64_t>(b[1]) << 32),
                static_cast<std::uint64_t>(b[2]) | (static_cast<std::uint64_t>(b[3]) << 32)};
    }
};

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives a decorrelated sub-seed (replica streams, initial-condition streams).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

// 64 bits -> uniform in (0, 1].
inline double bits_to_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Exp(1) by inversion; u in (0, 1] keeps the log argument positive.
inline double bits_to_exp1(std::uint64_t bits) { return -std::log(bits_to_unit(bits)); }

// Standard normal pair by Box-Muller from one 128-bit block.
inline std::array<double, 2> bits_to_gauss_pair(std::uint64_t bits0, std::uint64_t bits1) {
    const double radius = std::sqrt(2.0 * -std::log(bits_to_unit(bits0)));
    const double angle = 2.0 * M_PI * bits_to_unit(bits1);
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace lpplab
