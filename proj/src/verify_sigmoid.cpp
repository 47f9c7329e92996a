#include "specsamp/verify_sigmoid.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <vector>

#include "specsamp/verify_reference.hpp"

namespace specsamp {

void SigmoidStepInputs::validate() const {
    bounds.validate();
    const size_t b = z_q.batch(), g = z_q.steps(), v = z_q.vocab();
    if (z_p.batch() != b || z_p.vocab() != v || (z_p.steps() != g && z_p.steps() != g + 1)) {
        throw std::invalid_argument("SigmoidStepInputs: z_p must be B x gamma(+1) x V matching z_q");
    }
    if (draft_tokens.rows() != b || draft_tokens.cols() != g) {
        throw std::invalid_argument("SigmoidStepInputs: draft_tokens must be B x gamma");
    }
    if (uniforms.rows() != b || uniforms.cols() != g + 1) {
        throw std::invalid_argument("SigmoidStepInputs: uniforms must be B x (gamma+1)");
    }
    for (size_t r = 0; r < b; ++r) {
        for (size_t c = 0; c < g; ++c) {
            const int32_t t = draft_tokens(r, c);
            if (t < 0 || static_cast<size_t>(t) >= v) {
                throw std::invalid_argument("SigmoidStepInputs: draft token out of range");
            }
        }
    }
}

double sigmoid_activation(double z, ScaleBounds bounds, bool emulate_half) {
    return emulate_half ? sigmoid_scaled_value_half(z, bounds) : sigmoid_scaled_value(z, bounds);
}

ProbTensor materialize_sigmoid(const LogitTensor& z, ScaleBounds bounds, bool emulate_half) {
    bounds.validate();
    ProbTensor out(z.batch(), z.steps(), z.vocab(), /*normalized=*/false);
    const auto src = z.flat();
    const auto dst = out.values.flat();
    for (size_t i = 0; i < src.size(); ++i) {
        dst[i] = sigmoid_activation(src[i], bounds, emulate_half);
    }
    return out;
}

VerificationResult verify_sigmoid_sequential(const SigmoidStepInputs& inputs) {
    inputs.validate();
    StepInputs materialized;
    materialized.p = materialize_sigmoid(inputs.z_p, inputs.bounds, inputs.emulate_half);
    materialized.q = materialize_sigmoid(inputs.z_q, inputs.bounds, inputs.emulate_half);
    materialized.draft_tokens = inputs.draft_tokens;
    materialized.uniforms = inputs.uniforms;
    return verify_sequential(materialized);
}

namespace {

struct SigmoidTileResult {
    double b = 0.0;
    double tau = 0.0;
    bool has_tau = false;
};

SigmoidTileResult sigmoid_tile_pass(std::span<const double> zp_seg,
                                    std::span<const double> zq_seg,
                                    std::span<double> a_out,
                                    std::optional<size_t> drafted,
                                    ScaleBounds bounds,
                                    bool emulate_half,
                                    detail::TileScratch& scratch,
                                    MemoryTrace& trace) {
    const size_t len = zp_seg.size();
    if (len > scratch.p_buf.size()) {
        scratch.reserve(len);
    }

    // Step 1: load the logit segments from HBM into the modeled SRAM.
    std::copy(zp_seg.begin(), zp_seg.end(), scratch.p_buf.begin());
    std::copy(zq_seg.begin(), zq_seg.end(), scratch.work_buf.begin());
    trace.hbm_elem_reads_p += len;
    trace.hbm_elem_reads_q += len;
    trace.kernel_invocations += 1;
    trace.note_tile_bytes((2 * len + std::bit_ceil(len)) * sizeof(double));

    // Step 2: activations in place, then the same partials as the exact pass.
    for (size_t i = 0; i < len; ++i) {
        scratch.p_buf[i] = sigmoid_activation(scratch.p_buf[i], bounds, emulate_half);
        scratch.work_buf[i] = sigmoid_activation(scratch.work_buf[i], bounds, emulate_half);
    }

    SigmoidTileResult out;
    if (drafted) {
        out.tau = ratio_clamped(scratch.p_buf[*drafted], scratch.work_buf[*drafted]);
        out.has_tau = true;
    }
    for (size_t i = 0; i < len; ++i) {
        scratch.work_buf[i] = std::max(0.0, scratch.p_buf[i] - scratch.work_buf[i]);
    }
    out.b = tree_reduce({scratch.work_buf.data(), len}, scratch.red_buf);

    // Step 3: write the partials back.
    std::copy(scratch.work_buf.begin(), scratch.work_buf.begin() + len, a_out.begin());
    trace.hbm_elem_writes += len + 1 + (out.has_tau ? 1 : 0);
    return out;
}

// Aggregation-phase activation of one full row (degenerate fallback and bonus
// token), chunked over the pool.
void activate_row(std::span<const double> z_row, std::span<double> out, ScaleBounds bounds,
                  bool emulate_half, WorkerPool& pool) {
    constexpr size_t kChunk = 8192;
    const size_t chunks = (z_row.size() + kChunk - 1) / kChunk;
    pool.parallel_for(chunks, [&](size_t chunk, unsigned) {
        const size_t begin = chunk * kChunk;
        const size_t end = std::min(begin + kChunk, z_row.size());
        for (size_t i = begin; i < end; ++i) {
            out[i] = sigmoid_activation(z_row[i], bounds, emulate_half);
        }
    });
}

}  // namespace

FusedVerifyOutput verify_sigmoid_fused(const SigmoidStepInputs& inputs, const TilePlan& plan,
                                       WorkerPool& pool) {
    inputs.validate();
    if (plan.vocab_size != inputs.vocab() || plan.tiles.empty()) {
        throw std::invalid_argument("verify_sigmoid_fused: tile plan does not match the vocabulary");
    }

    const size_t batch = inputs.batch(), gamma = inputs.gamma(), tiles = plan.tile_count();
    const size_t task_count = batch * gamma * tiles;

    FusedVerifyOutput out;
    out.result.accepted_len.assign(batch, 0);
    out.result.tau = Matrix<double>(batch, gamma);
    out.result.final_token.assign(batch, kNoToken);
    out.result.resample_used.assign(batch, 0);
    out.result.residual_denom.assign(batch, 0.0);

    Grid3 a_grid(batch, gamma, inputs.vocab());
    std::vector<double> b_partials(task_count, 0.0);
    std::vector<detail::TileScratch> scratch(pool.size());
    std::vector<MemoryTrace> worker_traces(pool.size());
    for (auto& s : scratch) {
        s.reserve(plan.tile_width);
    }

    auto& tau = out.result.tau;
    pool.parallel_for(task_count, [&](size_t task, unsigned worker) {
        const size_t b = task / (gamma * tiles);
        const size_t rem = task % (gamma * tiles);
        const size_t c = rem / tiles;
        const size_t k = rem % tiles;
        const TileRange range = plan.tiles[k];

        const auto zp_seg = inputs.z_p.row(b, c).subspan(range.begin, range.size());
        const auto zq_seg = inputs.z_q.row(b, c).subspan(range.begin, range.size());
        const auto a_out = a_grid.row(b, c).subspan(range.begin, range.size());

        std::optional<size_t> drafted;
        const auto token = static_cast<size_t>(inputs.draft_tokens(b, c));
        if (token >= range.begin && token < range.end) {
            drafted = token - range.begin;
        }

        const auto res = sigmoid_tile_pass(zp_seg, zq_seg, a_out, drafted, inputs.bounds,
                                           inputs.emulate_half, scratch[worker],
                                           worker_traces[worker]);
        b_partials[task] = res.b;
        if (res.has_tau) {
            tau(b, c) = res.tau;
        }
    });

    for (const auto& t : worker_traces) {
        out.trace.merge(t);
    }

    std::vector<double> red_scratch(std::bit_ceil(tiles));
    std::vector<double> row_scratch;
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
                out.result.final_token[b] =
                    static_cast<int32_t>(scan_categorical(a_grid.row(b, accepted), denom, u_final));
                out.trace.hbm_elem_writes += inputs.vocab();
            } else {
                row_scratch.resize(inputs.vocab());
                activate_row(inputs.z_p.row(b, accepted), row_scratch, inputs.bounds,
                             inputs.emulate_half, pool);
                out.result.final_token[b] = detail::sample_row(row_scratch, u_final);
            }
        } else if (inputs.has_bonus_row()) {
            row_scratch.resize(inputs.vocab());
            activate_row(inputs.z_p.row(b, gamma), row_scratch, inputs.bounds, inputs.emulate_half,
                         pool);
            out.result.final_token[b] = detail::sample_row(row_scratch, u_final);
        }
    }
    return out;
}

FusedVerifyOutput verify_sigmoid_fused(const SigmoidStepInputs& inputs, const TilePlan& plan,
                                       unsigned workers) {
    WorkerPool pool(workers);
    return verify_sigmoid_fused(inputs, plan, pool);
}

}  // namespace specsamp
