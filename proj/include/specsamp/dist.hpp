#pragma once

#include <span>
#include <vector>

namespace specsamp {

// Zero-denominator guard used by every ratio / normalization in the engine.
inline constexpr double kZeroEps = 1e-12;

// A row of raw model scores over the vocabulary.
using LogitRow = std::vector<double>;

// A row of per-token scores in [0, 1]. Rows produced by stable_softmax or
// max_norm sum to 1 (within 1e-9); rows produced by the sigmoid approximation
// carry normalized = false and do not. max_norm sets `degenerate` when the
// positive mass underflows and callers must fall back.
struct ProbRow {
    std::vector<double> values;
    bool normalized = true;
    bool degenerate = false;
};

// Affine rescale bounds for the sigmoid approximation. alpha < 0 < beta.
struct ScaleBounds {
    double alpha;
    double beta;

    // Throws std::invalid_argument unless alpha < 0 < beta.
    void validate() const;
    double width() const { return beta - alpha; }
};

// Numerically stable sigmoid: exact for any finite t, and well defined at
// +/-inf (1 and 0), which the half-precision emulation relies on.
double stable_sigmoid(double t);

// softmax(w)_j = exp(w_j - max w) / sum exp(w_l - max w).
// Throws std::invalid_argument on empty or non-finite input.
ProbRow stable_softmax(std::span<const double> logits);

// In-place variant writing into `out` (same length as `logits`).
void stable_softmax_into(std::span<const double> logits, std::span<double> out);

// sigmoid((z - alpha) / (beta - alpha)) per element. Output is positive,
// order-preserving in z, and not normalized.
ProbRow sigmoid_scaled(std::span<const double> logits, ScaleBounds bounds);

// Single-element form shared by the fused sigmoid kernel and its oracle.
double sigmoid_scaled_value(double z, ScaleBounds bounds);

// Half-precision emulation of sigmoid_scaled_value: the logit, the rescaled
// argument and the activation are each rounded to the nearest binary16 value,
// modeling a kernel whose operands and outputs live in half precision. The
// reciprocal width is precomputed once at full precision, as a host would.
double sigmoid_scaled_value_half(double z, ScaleBounds bounds);

struct MaxNormResult {
    ProbRow dist;   // max(0, f_i) / denom, or all zeros when degenerate
    double denom;   // sum of max(0, f_i), double accumulation
};

// max_norm(f) = max(0, f) / sum max(0, f). When the denominator is <= kZeroEps
// the result row is flagged degenerate (not an error; callers fall back).
MaxNormResult max_norm(std::span<const double> f);

// min(1, p / q) with the q-underflow convention: q <= eps yields 1 when
// p > eps and 0 otherwise. Throws std::invalid_argument on negative input.
double ratio_clamped(double p, double q);

// Plain left-to-right double sum; the sequential baseline every tiled
// reduction is checked against.
double sequential_sum(std::span<const double> values);

// Inverse-CDF draw over `values` interpreted as a categorical distribution
// with total mass `denom`: scans indices ascending, returns the first i with
// u < sum_{j<=i} values[j] / denom. Falls back to the last index with positive
// mass (index 0 if none) when rounding keeps the cumulative sum below u.
// This exact scan is the single sampling rule shared by all backends.
size_t scan_categorical(std::span<const double> values, double denom, double u);

}  // namespace specsamp
