#pragma once

// Self-contained counter-based RNG. Per-item streams are derived from
// (seed, item index), so parallel sampling is reproducible for any thread
// count and any execution order.

#include <cstdint>

namespace sasaki {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t s) : state(s) {}
    std::uint64_t next() {
        std::uint64_t x = (state += 0x9E3779B97F4A7C15ULL);
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }
};

// Derive an independent stream seed for item `index` of stream `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    std::uint64_t s = sm.next();
    return sm.next() ^ (s << 1);
}

class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
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

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [a, b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Standard normal sampler (Box-Muller, pair-cached).
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next();

    Xoshiro256ss& engine() { return rng_; }

  private:
    Xoshiro256ss rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sasaki
