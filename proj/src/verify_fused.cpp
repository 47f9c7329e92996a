#include "specsamp/verify_fused.hpp"

#include <bit>
#include <optional>
#include <stdexcept>
#include <vector>

#include "specsamp/dist.hpp"
#include "specsamp/verify_reference.hpp"

namespace specsamp {

FusedVerifyOutput verify_fused(StepInputs& inputs, const TilePlan& plan, WorkerPool& pool) {
    inputs.validate();
    if (plan.vocab_size != inputs.vocab() || plan.tiles.empty()) {
        throw std::invalid_argument("verify_fused: tile plan does not match the input vocabulary");
    }

    const size_t batch = inputs.batch(), gamma = inputs.gamma(), tiles = plan.tile_count();
    const size_t task_count = batch * gamma * tiles;

    FusedVerifyOutput out;
    out.result.accepted_len.assign(batch, 0);
    out.result.tau = Matrix<double>(batch, gamma);
    out.result.final_token.assign(batch, kNoToken);
    out.result.resample_used.assign(batch, 0);
    out.result.residual_denom.assign(batch, 0.0);

    std::vector<double> b_partials(task_count, 0.0);
    std::vector<detail::TileScratch> scratch(pool.size());
    std::vector<MemoryTrace> worker_traces(pool.size());
    for (auto& s : scratch) {
        s.reserve(plan.tile_width);
    }

    auto& p = inputs.p;
    auto& q = inputs.q;
    const auto& draft_tokens = inputs.draft_tokens;
    auto& tau = out.result.tau;

    pool.parallel_for(task_count, [&](size_t task, unsigned worker) {
        const size_t b = task / (gamma * tiles);
        const size_t rem = task % (gamma * tiles);
        const size_t c = rem / tiles;
        const size_t k = rem % tiles;
        const TileRange range = plan.tiles[k];

        const auto p_seg = p.row(b, c).subspan(range.begin, range.size());
        const auto q_seg = q.row(b, c).subspan(range.begin, range.size());
        const auto a_out = q.row(b, c).subspan(range.begin, range.size());

        std::optional<size_t> drafted;
        const auto token = static_cast<size_t>(draft_tokens(b, c));
        if (token >= range.begin && token < range.end) {
            drafted = token - range.begin;
        }

        const auto res = detail::tile_pass_core(p_seg, q_seg, a_out, drafted, scratch[worker],
                                                worker_traces[worker]);
        b_partials[task] = res.b;
        if (res.has_tau) {
            tau(b, c) = res.tau;
        }
    });

    for (const auto& t : worker_traces) {
        out.trace.merge(t);
    }

    // Aggregation phase, on the materialized partials.
    std::vector<double> red_scratch(std::bit_ceil(tiles));
    for (size_t b = 0; b < batch; ++b) {
        size_t accepted = 0;
        while (accepted < gamma && inputs.uniforms(b, accepted) <= tau(b, accepted)) {
            ++accepted;
        }
        out.result.accepted_len[b] = static_cast<int32_t>(accepted);

        const double u_final = inputs.uniforms(b, gamma);
        if (accepted < gamma) {
            out.result.resample_used[b] = 1;
            const std::span<const double> partials{b_partials.data() + (b * gamma + accepted) * tiles,
                                                   tiles};
            const double denom = tree_reduce(partials, red_scratch);
            if (denom > kZeroEps) {
                out.result.residual_denom[b] = denom;
                // The final max_norm division is one pass over a(x)/b, fused
                // here into the inverse-CDF scan and counted as writes.
                out.result.final_token[b] =
                    static_cast<int32_t>(scan_categorical(q.row(b, accepted), denom, u_final));
                out.trace.hbm_elem_writes += inputs.vocab();
            } else {
                out.result.final_token[b] = detail::sample_row(p.row(b, accepted), u_final);
            }
        } else if (inputs.has_bonus_row()) {
            out.result.final_token[b] = detail::sample_row(p.row(b, gamma), u_final);
        }
    }
    return out;
}

FusedVerifyOutput verify_fused(StepInputs& inputs, const TilePlan& plan, unsigned workers) {
    WorkerPool pool(workers);
    return verify_fused(inputs, plan, pool);
}

}  // namespace specsamp
