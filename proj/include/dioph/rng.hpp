#pragma once

#include <cstdint>

namespace dioph {

// xoshiro256** with splitmix64 seeding. Self-contained so streams are
// byte-identical across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& si : s_) {
            x += 0x9E3779B97f4A7C15ull;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
            si = z ^ (z >> 31);
        }
    }

    // Independent substream for a labeled task (sample index, shard id, ...).
    Rng fork(uint64_t label) const {
        Rng r(*this);
        r.s_[0] ^= 0xD1B54A32D192ED03ull * (label + 1);
        r.s_[2] ^= 0x8CB92BA72F3D8DD7ull * (label + 0x9E37ull);
        r.next();
        r.next();
        return r;
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    uint64_t below(uint64_t n) {
        // rejection to avoid modulo bias
        uint64_t lim = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = next(); } while (v >= lim);
        return v % n;
    }

    long range(long lo, long hi) { // inclusive
        return lo + static_cast<long>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

} // namespace dioph
