#pragma once

#include "specsamp/step.hpp"
#include "specsamp/tile.hpp"
#include "specsamp/worker_pool.hpp"

namespace specsamp {

struct FusedVerifyOutput {
    VerificationResult result;
    MemoryTrace trace;
};

// Tiled exact verification. Dispatches K x B x gamma tile passes over the
// pool, reduces the residual mass per position with a fixed pairwise tree
// (ascending tile index), and resamples exactly like verify_sequential.
//
// Consumes inputs.q: the clamped residuals a = max(0, p - q) are written back
// into q's storage. This is safe by construction -- every q element is loaded
// into the modeled SRAM exactly once, before anything is stored -- and it is
// what keeps the backend's resident memory at the baseline's level.
//
// Results are bit-identical for any worker count.
FusedVerifyOutput verify_fused(StepInputs& inputs, const TilePlan& plan, WorkerPool& pool);

// Convenience overload owning a throwaway pool of `workers` threads.
FusedVerifyOutput verify_fused(StepInputs& inputs, const TilePlan& plan, unsigned workers);

}  // namespace specsamp
