#pragma once

#include "specsamp/dist.hpp"
#include "specsamp/step.hpp"
#include "specsamp/tile.hpp"
#include "specsamp/verify_fused.hpp"
#include "specsamp/worker_pool.hpp"

namespace specsamp {

// Verification step carrying raw logits instead of probabilities: the
// activation runs inside the tile kernel. `emulate_half` rounds logits and
// activations to binary16-representable values, reproducing the behavior of
// half-precision model outputs.
struct SigmoidStepInputs {
    LogitTensor z_p;  // B x gamma(+1) x V
    LogitTensor z_q;  // B x gamma x V
    ScaleBounds bounds;
    bool emulate_half = false;
    Matrix<int32_t> draft_tokens;
    Matrix<double> uniforms;

    size_t batch() const { return z_q.batch(); }
    size_t gamma() const { return z_q.steps(); }
    size_t vocab() const { return z_q.vocab(); }
    bool has_bonus_row() const { return z_p.steps() == z_q.steps() + 1; }

    void validate() const;
};

// The elementwise activation used by both the fused kernel and the sequential
// oracle, so the two stay bit-identical.
double sigmoid_activation(double z, ScaleBounds bounds, bool emulate_half);

// Materializes sigmoid((z - alpha) / (beta - alpha)) for a whole tensor.
// The result is not normalized.
ProbTensor materialize_sigmoid(const LogitTensor& z, ScaleBounds bounds, bool emulate_half);

// Sequential oracle for the sigmoid backend: materialize p-hat and q-hat in
// full, then verify exactly as the reference backend.
VerificationResult verify_sigmoid_sequential(const SigmoidStepInputs& inputs);

// Fused approximate verification: per tile, load the logit segments once,
// apply the scaled sigmoid in the modeled SRAM, then compute tau/a/b and
// aggregate exactly like the exact backend. Inputs are not modified; the
// clamped residuals live in an internal grid. Bit-identical across worker
// counts.
FusedVerifyOutput verify_sigmoid_fused(const SigmoidStepInputs& inputs, const TilePlan& plan,
                                       WorkerPool& pool);
FusedVerifyOutput verify_sigmoid_fused(const SigmoidStepInputs& inputs, const TilePlan& plan,
                                       unsigned workers);

}  // namespace specsamp
