#pragma once

#include <cstdint>

namespace specsamp {

// Counter-based random stream: draw i is a pure function of (seed, i), so any
// position can be replayed without generating its predecessors. All randomness
// in the decode loop flows through one such stream in a fixed draw order,
// which is what makes cross-backend transcripts comparable.
class CounterRng {
public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    // The i-th 64-bit word of the stream for `seed`, stateless.
    static uint64_t word_at(uint64_t seed, uint64_t index);

    uint64_t next_u64() { return word_at(seed_, counter_++); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform();

    // Standard normal via Box-Muller; consumes exactly two draws.
    double next_normal();

    uint64_t seed() const { return seed_; }
    uint64_t counter() const { return counter_; }
    void skip_to(uint64_t counter) { counter_ = counter; }

private:
    uint64_t seed_;
    uint64_t counter_ = 0;
};

}  // namespace specsamp
