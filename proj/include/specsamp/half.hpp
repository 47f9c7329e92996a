#pragma once

#include <cstdint>

namespace specsamp {

// IEEE binary16 conversions, round-to-nearest-even, overflow to +/-inf.
// Used only by the reduced-precision emulation mode.
uint16_t float_to_half_bits(float f);
float half_bits_to_float(uint16_t h);

// Rounds x to the nearest binary16-representable value and widens it back
// (via float; the intermediate narrowing is deterministic).
double round_to_half(double x);

}  // namespace specsamp
