#include "specsamp/tile.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "specsamp/dist.hpp"

namespace specsamp {

TilePlan plan_tiles(size_t vocab_size, size_t tile_width) {
    if (vocab_size == 0 || tile_width == 0) {
        throw std::invalid_argument("plan_tiles: vocab_size and tile_width must be >= 1");
    }
    TilePlan plan;
    plan.vocab_size = vocab_size;
    plan.tile_width = tile_width;
    plan.tiles.reserve((vocab_size + tile_width - 1) / tile_width);
    for (size_t begin = 0; begin < vocab_size; begin += tile_width) {
        plan.tiles.push_back({begin, std::min(begin + tile_width, vocab_size)});
    }
    return plan;
}

void MemoryTrace::merge(const MemoryTrace& other) {
    hbm_elem_reads_p += other.hbm_elem_reads_p;
    hbm_elem_reads_q += other.hbm_elem_reads_q;
    hbm_elem_writes += other.hbm_elem_writes;
    kernel_invocations += other.kernel_invocations;
    note_tile_bytes(other.peak_tile_bytes);
}

double tree_reduce(std::span<const double> values, std::span<double> scratch) {
    if (values.empty()) return 0.0;
    const size_t m = std::bit_ceil(values.size());
    std::copy(values.begin(), values.end(), scratch.begin());
    std::fill(scratch.begin() + values.size(), scratch.begin() + m, 0.0);
    for (size_t stride = m >> 1; stride >= 1; stride >>= 1) {
        for (size_t i = 0; i < stride; ++i) {
            scratch[i] += scratch[i + stride];
        }
    }
    return scratch[0];
}

double tree_reduce(std::span<const double> values) {
    std::vector<double> scratch(values.empty() ? 0 : std::bit_ceil(values.size()));
    return tree_reduce(values, scratch);
}

namespace detail {

void TileScratch::reserve(size_t tile_width) {
    p_buf.resize(tile_width);
    work_buf.resize(tile_width);
    red_buf.resize(std::bit_ceil(tile_width));
}

TilePassResult tile_pass_core(std::span<const double> p_seg,
                              std::span<const double> q_seg,
                              std::span<double> a_out,
                              std::optional<size_t> drafted_index_in_tile,
                              TileScratch& scratch,
                              MemoryTrace& trace) {
    const size_t len = p_seg.size();
    if (q_seg.size() != len || a_out.size() != len) {
        throw std::invalid_argument("tile_pass_core: segment lengths must match");
    }
    if (len > scratch.p_buf.size()) {
        scratch.reserve(len);
    }

    // Step 1: load both segments from HBM into the modeled SRAM buffers.
    std::copy(p_seg.begin(), p_seg.end(), scratch.p_buf.begin());
    std::copy(q_seg.begin(), q_seg.end(), scratch.work_buf.begin());
    trace.hbm_elem_reads_p += len;
    trace.hbm_elem_reads_q += len;
    trace.kernel_invocations += 1;
    trace.note_tile_bytes((2 * len + std::bit_ceil(len)) * sizeof(double));

    TilePassResult out;
    if (drafted_index_in_tile) {
        const size_t d = *drafted_index_in_tile;
        if (d >= len) {
            throw std::invalid_argument("tile_pass_core: drafted index outside tile");
        }
        out.tau = ratio_clamped(scratch.p_buf[d], scratch.work_buf[d]);
        out.has_tau = true;
    }

    // Step 2: element-wise a = max(0, p - q) in SRAM, then the partial sum by
    // fixed pairwise tree reduction (double accumulation).
    for (size_t i = 0; i < len; ++i) {
        scratch.work_buf[i] = std::max(0.0, scratch.p_buf[i] - scratch.work_buf[i]);
    }
    out.b = tree_reduce({scratch.work_buf.data(), len}, scratch.red_buf);

    // Step 3: write the partials back to HBM.
    std::copy(scratch.work_buf.begin(), scratch.work_buf.begin() + len, a_out.begin());
    trace.hbm_elem_writes += len + 1 + (out.has_tau ? 1 : 0);
    return out;
}

}  // namespace detail

TilePartial kernel_tile_pass(std::span<const double> p_seg,
                             std::span<const double> q_seg,
                             std::optional<size_t> drafted_index_in_tile,
                             MemoryTrace& trace,
                             size_t tile_index) {
    TilePartial partial;
    partial.tile_index = tile_index;
    partial.a.resize(p_seg.size());
    detail::TileScratch scratch;
    scratch.reserve(p_seg.empty() ? 1 : p_seg.size());
    const auto res =
        detail::tile_pass_core(p_seg, q_seg, partial.a, drafted_index_in_tile, scratch, trace);
    partial.b = res.b;
    if (res.has_tau) partial.tau_ck = res.tau;
    return partial;
}

}  // namespace specsamp
