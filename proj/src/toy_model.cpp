#include "specsamp/toy_model.hpp"

#include <stdexcept>

#include "specsamp/rng.hpp"

namespace specsamp {

void ToyModel::scaled_logits(int32_t prev_token, std::span<double> out) const {
    const auto row = logits_row(prev_token);
    for (size_t i = 0; i < row.size(); ++i) {
        out[i] = row[i] / temperature;
    }
}

ModelPair make_model_pair(uint64_t seed, size_t vocab_size, double divergence,
                          double logit_scale) {
    if (vocab_size < 2) {
        throw std::invalid_argument("make_model_pair: vocab_size must be >= 2");
    }
    if (divergence < 0.0) {
        throw std::invalid_argument("make_model_pair: divergence must be >= 0");
    }

    ModelPair pair;
    pair.target.vocab_size = vocab_size;
    pair.target.seed = seed;
    pair.target.table.resize(vocab_size * vocab_size);
    CounterRng target_rng(seed);
    for (auto& v : pair.target.table) {
        v = logit_scale * target_rng.next_normal();
    }

    pair.draft = pair.target;
    // Distinct stream for the perturbation so the draft stays a deterministic
    // function of (seed, divergence).
    CounterRng draft_rng(seed ^ 0xd1fu);
    for (auto& v : pair.draft.table) {
        v += divergence * draft_rng.next_normal();
    }
    return pair;
}

}  // namespace specsamp
