#pragma once

// Counter-based random numbers (Philox4x32-10). A draw is a pure function of
// (seed, stream, index), so any parallel schedule reproduces the same values.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace lmr {

using u32x4 = std::array<std::uint32_t, 4>;

inline u32x4 philox4x32_10(u32x4 ctr, std::uint32_t k0, std::uint32_t k1) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ k0, std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ k1, std::uint32_t(p0)};
        k0 += W0;
        k1 += W1;
    }
    return ctr;
}

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag + 0x632BE59BD9B4E019ull));
}

/// 52-bit uniform strictly inside (0, 1).
inline double to_open01(std::uint64_t x) { return (double(x >> 12) + 0.5) * 0x1.0p-52; }

/// Block of two 64-bit words addressed by (seed, stream, index).
inline std::array<std::uint64_t, 2> counter_block(std::uint64_t seed, std::uint64_t stream,
                                                  std::uint64_t index) {
    const u32x4 out = philox4x32_10({std::uint32_t(index), std::uint32_t(index >> 32),
                                     std::uint32_t(stream), std::uint32_t(stream >> 32)},
                                    std::uint32_t(seed), std::uint32_t(seed >> 32));
    return {(std::uint64_t(out[1]) << 32) | out[0], (std::uint64_t(out[3]) << 32) | out[2]};
}

/// Sequential generator over one (seed, stream) pair, starting at a given
/// block index. Each block yields two 64-bit words.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t start = 0)
        : seed_(seed), stream_(stream), index_(start) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            buf_ = counter_block(seed_, stream_, index_++);
            have_ = 2;
        }
        return buf_[2 - have_--];
    }

    double uniform() { return to_open01(next_u64()); }
    double exponential() { return -std::log(uniform()); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

private:
    std::uint64_t seed_, stream_, index_;
    std::array<std::uint64_t, 2> buf_{};
    int have_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lmr
