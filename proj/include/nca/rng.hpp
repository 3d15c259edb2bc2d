#pragma once

#include <cstdint>
#include <initializer_list>

namespace nca {

// Counter-based stream: draw i is a pure function of (seed, i). Identical
// (seed, counter) pairs give identical draws on any platform, and streams
// can be split or replayed without carrying hidden state.
struct RngStream {
    uint64_t seed = 0;
    uint64_t counter = 0;

    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static constexpr uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t next_u64() { return mix(seed + ++counter * kGamma); }

    // uniform in [0,1), 24-bit mantissa
    float next_float() { return float(next_u64() >> 40) * 0x1p-24f; }

    // uniform in [0,1), 53-bit mantissa
    double next_double() { return double(next_u64() >> 11) * 0x1p-53; }

    // uniform integer in [0, n), unbiased via rejection
    uint32_t next_below(uint32_t n) {
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return uint32_t(v % n);
    }

    // symmetric uniform in [-s, s]
    float next_uniform_sym(float s) { return (next_float() * 2.0f - 1.0f) * s; }

    // child stream whose seed depends on the path elements; used to hand
    // independent streams to batch items / generations in a canonical order
    static RngStream derive(uint64_t seed, std::initializer_list<uint64_t> path) {
        uint64_t s = mix(seed + kGamma);
        for (uint64_t p : path) s = mix(s ^ (p + kGamma));
        return RngStream{s, 0};
    }
};

}  // namespace nca
