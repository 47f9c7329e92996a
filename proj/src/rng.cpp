#include "specsamp/rng.hpp"

#include <cmath>
#include <numbers>

namespace specsamp {

namespace {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Applied to seed + index *
// golden gamma, this is the indexed form of the generator.
uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

uint64_t CounterRng::word_at(uint64_t seed, uint64_t index) {
    return mix64(seed + (index + 1) * 0x9e3779b97f4a7c15ull);
}

double CounterRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_normal() {
    // u1 nudged away from 0 so log stays finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace specsamp
