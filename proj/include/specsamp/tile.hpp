#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace specsamp {

struct TileRange {
    size_t begin = 0;
    size_t end = 0;  // half-open
    size_t size() const { return end - begin; }
    bool operator==(const TileRange&) const = default;
};

// Partition of [0, vocab_size) into K = ceil(vocab_size / tile_width) ranges
// of at most tile_width elements; only the last range may be shorter.
struct TilePlan {
    size_t vocab_size = 0;
    size_t tile_width = 0;
    std::vector<TileRange> tiles;

    size_t tile_count() const { return tiles.size(); }
};

// Throws std::invalid_argument when vocab_size or tile_width is zero.
TilePlan plan_tiles(size_t vocab_size, size_t tile_width);

// Modeled HBM traffic and on-chip residency of the fused backends. Counters
// are exact element counts of what the tile kernels load from and store to
// HBM; the aggregation phase operates on already materialized partial results
// and is not counted as kernel traffic.
struct MemoryTrace {
    uint64_t hbm_elem_reads_p = 0;
    uint64_t hbm_elem_reads_q = 0;
    uint64_t hbm_elem_writes = 0;
    uint64_t peak_tile_bytes = 0;  // modeled SRAM high-water mark of one tile pass
    uint64_t kernel_invocations = 0;

    void note_tile_bytes(uint64_t bytes) {
        if (bytes > peak_tile_bytes) peak_tile_bytes = bytes;
    }
    // Per-worker traces are merged into one exact total.
    void merge(const MemoryTrace& other);

    bool operator==(const MemoryTrace&) const = default;
};

// Per-tile partial results: the clamped ratio at the drafted token when it
// falls inside this tile, the clamped differences a = max(0, p - q), and their
// tree-reduced partial sum b.
struct TilePartial {
    size_t tile_index = 0;
    std::optional<double> tau_ck;
    std::vector<double> a;
    double b = 0.0;
};

// One tile pass: loads both segments (counted as one HBM read per element),
// computes tau/a/b for the sub-vocabulary, and counts the write-back of the
// partial results. Segments must have equal length.
TilePartial kernel_tile_pass(std::span<const double> p_seg,
                             std::span<const double> q_seg,
                             std::optional<size_t> drafted_index_in_tile,
                             MemoryTrace& trace,
                             size_t tile_index = 0);

// Fixed-topology pairwise tree sum: values are padded with zeros to the next
// power of two and reduced by halving, so the result is independent of how
// tiles were scheduled across workers. scratch.size() must be >=
// bit_ceil(values.size()).
double tree_reduce(std::span<const double> values, std::span<double> scratch);

// Convenience form that owns its scratch.
double tree_reduce(std::span<const double> values);

namespace detail {

// Reusable modeled-SRAM buffers for one worker.
struct TileScratch {
    std::vector<double> p_buf;
    std::vector<double> work_buf;
    std::vector<double> red_buf;
    void reserve(size_t tile_width);
};

struct TilePassResult {
    double b = 0.0;
    double tau = 0.0;
    bool has_tau = false;
};

// Core of the tile pass. `a_out` is the modeled HBM destination of the
// clamped differences; it may alias q_seg, since every q element is loaded
// into the scratch buffers (exactly once) before anything is stored.
TilePassResult tile_pass_core(std::span<const double> p_seg,
                              std::span<const double> q_seg,
                              std::span<double> a_out,
                              std::optional<size_t> drafted_index_in_tile,
                              TileScratch& scratch,
                              MemoryTrace& trace);

}  // namespace detail

}  // namespace specsamp
