#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fdrec {

// Finalizer of the splitmix64 sequence (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic child-seed derivation: the (stream+1)-th output of the
// splitmix64 sequence started at `base`. Used to fan a user-facing seed out
// into per-size and per-replication seeds; the draws themselves come from the
// counter-based generator below, so derived seeds never collide with the
// stream mechanism.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64_mix(base + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

// Philox 4x32 counter-based generator, 10 rounds (Salmon et al. 2011).
// State is (key, stream, block counter); a fixed seed and stream give one
// fixed sequence regardless of what other streams were consumed, which is
// what makes parallel replication layouts reproducible.
class Philox4x32 {
public:
    explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    // One keyed block, exposed for known-answer tests.
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    std::uint32_t next_u32() {
        if (buf_pos_ == 4) {
            buf_ = block({static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
            ++block_;
            buf_pos_ = 0;
        }
        return buf_[static_cast<std::size_t>(buf_pos_++)];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on (0, 1]: 53 random bits, shifted into the open-below interval
    // so that log(u) below is always finite.
    double uniform01() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached, so draw order is part of the reproducibility contract.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    std::uint64_t stream() const { return stream_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

using Rng = Philox4x32;

}  // namespace fdrec
