#pragma once

#include <cstdint>

namespace evt {

// Philox4x32-10 counter-based generator.
//
// Stream scheme: the 128-bit counter block is (n_lo, n_hi, stream_lo,
// stream_hi) and the 64-bit key is a splitmix64 hash of the seed, so streams
// are disjoint by construction and any (seed, stream, n) triple addresses the
// same block on every thread and platform. Each block yields two 64-bit words.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : stream_(stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        key_ = z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        std::uint32_t c0 = static_cast<std::uint32_t>(block_);
        std::uint32_t c1 = static_cast<std::uint32_t>(block_ >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(stream_);
        std::uint32_t c3 = static_cast<std::uint32_t>(stream_ >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(key_);
        std::uint32_t k1 = static_cast<std::uint32_t>(key_ >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * c0;
            const std::uint64_t p1 = 0xCD9E8D57ull * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        ++block_;
        spare_ = (static_cast<std::uint64_t>(c3) << 32) | c2;
        have_ = true;
        return (static_cast<std::uint64_t>(c1) << 32) | c0;
    }

    // Uniform draw strictly inside (0,1).
    double uniform_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::uint64_t spare_ = 0;
    bool have_ = false;
};

}  // namespace evt
