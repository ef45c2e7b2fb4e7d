#pragma once

#include <cstdint>

namespace qldpc {

// Deterministic splitmix64 generator. Word-size independent output; used for
// every randomized component so results are reproducible across platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n). Multiply-shift (high word of the 64x64 product);
    // deterministic across platforms.
    uint64_t below(uint64_t n) {
        uint64_t x = next();
        uint64_t x_lo = x & 0xffffffffull, x_hi = x >> 32;
        uint64_t n_lo = n & 0xffffffffull, n_hi = n >> 32;
        uint64_t carry = (x_lo * n_lo) >> 32;
        uint64_t mid1 = x_hi * n_lo + carry;
        uint64_t mid2 = x_lo * n_hi + (mid1 & 0xffffffffull);
        return x_hi * n_hi + (mid1 >> 32) + (mid2 >> 32);
    }

    // Counter-based split: the stream for (seed, counter) is independent of
    // how many values were drawn from any other counter's stream.
    static Rng split(uint64_t seed, uint64_t counter) {
        Rng mixer(seed ^ (0x5851f42d4c957f2dull * (counter + 1)));
        uint64_t a = mixer.next();
        uint64_t b = mixer.next();
        return Rng(a ^ (b << 1));
    }

  private:
    uint64_t state_;
};

}  // namespace qldpc
