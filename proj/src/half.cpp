#include "specsamp/half.hpp"

#include <bit>

namespace specsamp {

uint16_t float_to_half_bits(float f) {
    const uint32_t x = std::bit_cast<uint32_t>(f);
    const uint32_t sign = (x >> 16) & 0x8000u;
    uint32_t mant = x & 0x007fffffu;
    const uint32_t exp_f = (x >> 23) & 0xffu;

    if (exp_f == 0xffu) {  // inf or NaN
        return static_cast<uint16_t>(sign | 0x7c00u | (mant ? 0x0200u : 0u));
    }

    const int32_t exp_h = static_cast<int32_t>(exp_f) - 127 + 15;
    if (exp_h >= 0x1f) {  // overflow -> inf
        return static_cast<uint16_t>(sign | 0x7c00u);
    }
    if (exp_h <= 0) {  // subnormal or zero
        if (exp_h < -10) {
            return static_cast<uint16_t>(sign);
        }
        mant |= 0x00800000u;
        const uint32_t shift = static_cast<uint32_t>(14 - exp_h);
        uint32_t half_mant = mant >> shift;
        const uint32_t rem = mant & ((1u << shift) - 1u);
        const uint32_t halfway = 1u << (shift - 1u);
        if (rem > halfway || (rem == halfway && (half_mant & 1u))) {
            ++half_mant;  // may carry into the exponent field, which is correct
        }
        return static_cast<uint16_t>(sign | half_mant);
    }

    uint16_t h = static_cast<uint16_t>(sign | (static_cast<uint32_t>(exp_h) << 10) | (mant >> 13));
    const uint32_t rem = mant & 0x1fffu;
    if (rem > 0x1000u || (rem == 0x1000u && (h & 1u))) {
        ++h;  // 0x7bff + 1 == 0x7c00: saturation to inf falls out of the carry
    }
    return h;
}

float half_bits_to_float(uint16_t h) {
    const uint32_t sign = (static_cast<uint32_t>(h) & 0x8000u) << 16;
    const uint32_t exp = (h >> 10) & 0x1fu;
    uint32_t mant = h & 0x3ffu;
    uint32_t f;
    if (exp == 0) {
        if (mant == 0) {
            f = sign;
        } else {
            int shifts = 0;
            while (!(mant & 0x400u)) {
                mant <<= 1;
                ++shifts;
            }
            mant &= 0x3ffu;
            f = sign | (static_cast<uint32_t>(113 - shifts) << 23) | (mant << 13);
        }
    } else if (exp == 0x1fu) {
        f = sign | 0x7f800000u | (mant << 13);
    } else {
        f = sign | ((exp - 15 + 127) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(f);
}

double round_to_half(double x) {
    return static_cast<double>(half_bits_to_float(float_to_half_bits(static_cast<float>(x))));
}

}  // namespace specsamp
