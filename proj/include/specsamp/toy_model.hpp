#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace specsamp {

// Order-1 Markov model over token ids: one row of next-token logits per
// previous token. Small enough that per-context distributions can be checked
// by brute force, and a deterministic function of its seed.
struct ToyModel {
    size_t vocab_size = 0;
    std::vector<double> table;  // vocab_size x vocab_size row-major logits
    double temperature = 1.0;
    uint64_t seed = 0;

    std::span<const double> logits_row(int32_t prev_token) const {
        return {table.data() + static_cast<size_t>(prev_token) * vocab_size, vocab_size};
    }

    // Writes logits_row(prev) / temperature into out.
    void scaled_logits(int32_t prev_token, std::span<double> out) const;
};

// Builds a (target, draft) pair: the target table is seeded Gaussian noise of
// scale `logit_scale`, the draft table adds an independent zero-mean
// perturbation with standard deviation `divergence`. divergence = 0 yields an
// identical draft.
struct ModelPair {
    ToyModel target;
    ToyModel draft;
};
ModelPair make_model_pair(uint64_t seed, size_t vocab_size, double divergence,
                          double logit_scale = 4.0);

}  // namespace specsamp
