#include "specsamp/decode.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>

#include "specsamp/rng.hpp"
#include "specsamp/step.hpp"
#include "specsamp/verify_fused.hpp"
#include "specsamp/verify_reference.hpp"
#include "specsamp/verify_sigmoid.hpp"

namespace specsamp {

Backend parse_backend(const std::string& name) {
    if (name == "reference") return Backend::reference;
    if (name == "fused") return Backend::fused;
    if (name == "sigmoid") return Backend::sigmoid;
    throw std::invalid_argument("unknown backend: " + name);
}

const char* backend_name(Backend backend) {
    switch (backend) {
        case Backend::reference: return "reference";
        case Backend::fused: return "fused";
        case Backend::sigmoid: return "sigmoid";
    }
    return "?";
}

GammaState gamma_update(GammaState state, bool all_accepted) {
    if (all_accepted) {
        state.gamma = std::min(state.gamma + 2, state.max_gamma);
    } else {
        state.gamma = std::max(state.gamma - 1, state.min_gamma);
    }
    return state;
}

namespace {
using Clock = std::chrono::steady_clock;
}

DecodeOutput decode(const ToyModel& target, const ToyModel& draft,
                    std::span<const int32_t> prompt, const DecodeConfig& config) {
    if (prompt.empty()) {
        throw std::invalid_argument("decode: prompt must be non-empty");
    }
    if (config.max_len < 1) {
        throw std::invalid_argument("decode: max_len must be >= 1");
    }
    if (target.vocab_size != draft.vocab_size) {
        throw std::invalid_argument("decode: target and draft vocabularies differ");
    }
    if (config.backend == Backend::sigmoid) {
        config.bounds.validate();
    }

    const size_t vocab = target.vocab_size;
    const TilePlan plan = plan_tiles(vocab, std::min(config.tile_width, vocab));
    std::unique_ptr<WorkerPool> pool;
    if (config.backend != Backend::reference) {
        pool = std::make_unique<WorkerPool>(config.workers);
    }

    DecodeOutput out;
    out.tokens.reserve(config.max_len);
    CounterRng rng(config.seed);
    GammaState gamma_state = config.gamma;

    std::vector<double> logit_buf(vocab), prob_buf(vocab);

    while (out.tokens.size() < config.max_len) {
        const auto gamma = static_cast<size_t>(gamma_state.gamma);
        out.stats.gamma_history.push_back(gamma_state.gamma);

        // Context tokens for positions 0..gamma: prefix token, then drafts.
        int32_t ctx = out.tokens.empty() ? prompt.back() : out.tokens.back();

        // Draft gamma tokens autoregressively (draws 1..gamma of this step).
        std::vector<int32_t> drafted(gamma);
        std::vector<int32_t> contexts(gamma + 1);
        LogitTensor z_q(1, gamma, vocab);
        for (size_t c = 0; c < gamma; ++c) {
            contexts[c] = ctx;
            draft.scaled_logits(ctx, z_q.row(0, c));
            stable_softmax_into(z_q.row(0, c), prob_buf);
            drafted[c] = detail::sample_row(prob_buf, rng.next_uniform());
            ctx = drafted[c];
        }
        contexts[gamma] = ctx;

        // Acceptance draws r_1..r_gamma, then the resample/bonus draw.
        Matrix<double> uniforms(1, gamma + 1);
        for (size_t c = 0; c <= gamma; ++c) {
            uniforms(0, c) = rng.next_uniform();
        }
        Matrix<int32_t> draft_tokens(1, gamma);
        for (size_t c = 0; c < gamma; ++c) {
            draft_tokens(0, c) = drafted[c];
        }

        // Target scores gamma + 1 positions (the last row feeds the bonus
        // token on full acceptance).
        VerificationResult result;
        const auto t0 = Clock::now();
        if (config.backend == Backend::sigmoid) {
            SigmoidStepInputs inputs;
            inputs.z_p = LogitTensor(1, gamma + 1, vocab);
            for (size_t c = 0; c <= gamma; ++c) {
                target.scaled_logits(contexts[c], inputs.z_p.row(0, c));
            }
            inputs.z_q = std::move(z_q);
            inputs.bounds = config.bounds;
            inputs.emulate_half = config.emulate_half;
            inputs.draft_tokens = draft_tokens;
            inputs.uniforms = uniforms;
            result = verify_sigmoid_fused(inputs, plan, *pool).result;
        } else {
            StepInputs inputs;
            inputs.p = ProbTensor(1, gamma + 1, vocab);
            for (size_t c = 0; c <= gamma; ++c) {
                target.scaled_logits(contexts[c], logit_buf);
                stable_softmax_into(logit_buf, inputs.p.row(0, c));
            }
            inputs.q = ProbTensor(1, gamma, vocab);
            for (size_t c = 0; c < gamma; ++c) {
                stable_softmax_into(z_q.row(0, c), inputs.q.row(0, c));
            }
            inputs.draft_tokens = draft_tokens;
            inputs.uniforms = uniforms;
            result = config.backend == Backend::reference
                         ? verify_sequential(inputs)
                         : verify_fused(inputs, plan, *pool).result;
        }
        out.stats.verify_ns.push_back(static_cast<uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count()));

        const auto accepted = static_cast<size_t>(result.accepted_len[0]);
        for (size_t c = 0; c < accepted; ++c) {
            out.tokens.push_back(drafted[c]);
        }
        out.tokens.push_back(result.final_token[0]);

        const bool all_accepted = accepted == gamma;
        out.stats.all_accepted_history.push_back(all_accepted ? 1 : 0);
        out.stats.steps += 1;
        out.stats.total_drafted += gamma;
        out.stats.total_accepted += accepted;
        gamma_state = gamma_update(gamma_state, all_accepted);
    }

    if (out.tokens.size() > config.max_len) {
        out.tokens.resize(config.max_len);
    }
    out.stats.tokens_emitted = out.tokens.size();
    return out;
}

}  // namespace specsamp
