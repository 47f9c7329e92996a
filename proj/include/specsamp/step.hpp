#pragma once

#include <cstdint>
#include <vector>

#include "specsamp/tensor.hpp"

namespace specsamp {

// Sentinel for "all drafts accepted and no bonus row was provided".
inline constexpr int32_t kNoToken = -1;

// One verification step over B sequences and gamma drafted positions.
//
//   p       target probabilities, B x gamma x |V|, or B x (gamma+1) x |V|
//           when the caller provides a bonus row for full-acceptance sampling
//   q       draft probabilities, B x gamma x |V|
//   draft_tokens  B x gamma token ids drawn from q
//   uniforms      B x (gamma+1): acceptance draws r_1..r_gamma plus one final
//                 draw used for the resample (on rejection) or the bonus token
//
// All randomness is externalized here so different backends can be compared
// on identical draws.
struct StepInputs {
    ProbTensor p;
    ProbTensor q;
    Matrix<int32_t> draft_tokens;
    Matrix<double> uniforms;

    size_t batch() const { return q.batch(); }
    size_t gamma() const { return q.steps(); }
    size_t vocab() const { return q.vocab(); }
    bool has_bonus_row() const { return p.steps() == q.steps() + 1; }

    // Throws std::invalid_argument on any shape or range violation.
    void validate() const;
};

// Per-step outcome. tau carries the clamped ratio at every drafted position
// (including positions past the first rejection; the fused backend computes
// them all in parallel and the reference matches it). residual_denom is the
// max_norm denominator at the rejected position, 0 when no resample happened.
struct VerificationResult {
    std::vector<int32_t> accepted_len;   // per batch row, in [0, gamma]
    Matrix<double> tau;                  // B x gamma
    std::vector<int32_t> final_token;    // resample/bonus token, or kNoToken
    std::vector<uint8_t> resample_used;  // per batch row
    std::vector<double> residual_denom;  // per batch row

    bool operator==(const VerificationResult&) const = default;
};

}  // namespace specsamp
