#pragma once

#include <cstdint>

namespace credamp {

// splitmix64, used only to expand seeds into generator state.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** by Blackman & Vigna. Chosen over std::mt19937_64 because the
// full draw path (generator + bounded/real mappings below) is pinned here,
// so streams are bit-identical across standard libraries and platforms.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound), Lemire's rejection method.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        std::uint64_t l = static_cast<std::uint64_t>(m);
        if (l < bound) {
            std::uint64_t t = (0 - bound) % bound;
            while (l < t) {
                x = next();
                m = static_cast<__uint128_t>(x) * bound;
                l = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1), never exactly 0 or 1.
    double next_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

// Substream derivation: all randomness for one unit of work (a bootstrap
// iteration, a synthetic post) comes from (seed, index, attempt) only, so
// results do not depend on worker count or scheduling.
inline Xoshiro256 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t attempt = 0) {
    std::uint64_t mix = seed;
    mix ^= (index + 1) * 0x9E3779B97F4A7C15ULL;
    mix ^= (attempt + 1) * 0xD1B54A32D192ED03ULL;
    return Xoshiro256(mix);
}

}  // namespace credamp
