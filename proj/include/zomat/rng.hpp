#pragma once

#include <cstdint>

namespace zomat {

// Splittable deterministic generator (splitmix64 core). Every random choice
// in the library flows from one user seed through derive(), so results are
// reproducible regardless of call interleaving or scheduling.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    static Rng derive(uint64_t seed, uint64_t stream, uint64_t substream = 0) {
        Rng r(seed);
        r.absorb(stream);
        r.absorb(substream);
        return r;
    }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n), n >= 1.
    uint64_t uniform(uint64_t n) {
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    double uniform_real() { return (next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform_real() < p; }

private:
    void absorb(uint64_t x) {
        state_ ^= x * 0xD1B54A32D192ED03ull + 0x8BB84B93962EACC9ull;
        next_u64();
    }

    uint64_t state_;
};

}  // namespace zomat
