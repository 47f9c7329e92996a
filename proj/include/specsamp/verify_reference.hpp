#pragma once

#include <cstdint>
#include <span>

#include "specsamp/step.hpp"

namespace specsamp {

// Sequential, unoptimized verification. One batch row at a time, one position
// at a time; every fused backend is checked against this implementation.
VerificationResult verify_sequential(const StepInputs& inputs);

// Draw a replacement token after a rejection: inverse-CDF over
// max_norm(p_row - q_row), falling back to p_row itself when the clamped
// difference has no mass.
int32_t resample_adjusted(std::span<const double> p_row, std::span<const double> q_row, double u);

namespace detail {

struct ResampleOutcome {
    int32_t token;
    double denom;        // positive residual mass (before any fallback)
    bool used_fallback;  // degenerate residual, sampled from p_row instead
};

// Shared by resample_adjusted and verify_sequential so both report the same
// denominator.
ResampleOutcome resample_with_denom(std::span<const double> p_row,
                                    std::span<const double> q_row,
                                    double u);

// Categorical draw over an arbitrary (possibly unnormalized) row: scan against
// the row's sequential sum. Used for the degenerate fallback, the bonus token
// and draft sampling, identically in every backend.
int32_t sample_row(std::span<const double> row, double u);

}  // namespace detail

}  // namespace specsamp
