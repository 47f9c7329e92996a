#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specsamp/decode.hpp"
#include "specsamp/report.hpp"
#include "specsamp/step.hpp"
#include "specsamp/verify_sigmoid.hpp"

namespace specsamp {

// Verify-step benchmark grid. Timing covers only the verification pipeline:
// activation (softmax materialization for the probability backends, nothing
// for the sigmoid backend, whose activation runs inside the kernel) plus the
// verify call. Input generation stands in for model scoring and is excluded.
struct BenchConfig {
    std::vector<Backend> backends{Backend::reference, Backend::fused, Backend::sigmoid};
    std::vector<size_t> vocab_sizes{32768};
    std::vector<int> gammas{5};
    std::vector<uint64_t> seeds{1};
    std::vector<unsigned> worker_counts{2};
    size_t tile_width = 1024;
    ScaleBounds bounds{-1e3, 1e3};
    size_t trials = 30;  // timed iterations per grid point
    size_t warmup = 5;
    std::string output_path;  // empty: do not write
    ReportFormat format = ReportFormat::jsonl;

    void validate() const;  // throws std::invalid_argument
};

struct BenchReport {
    std::vector<BenchRow> rows;
};

// Deterministic inputs for one grid point: target logits are seeded Gaussians,
// draft logits a perturbation of them; draft tokens are drawn from the draft
// rows and all uniforms come from the same counter stream.
struct BenchInputs {
    LogitTensor z_p;  // 1 x (gamma+1) x V
    LogitTensor z_q;  // 1 x gamma x V
    Matrix<int32_t> draft_tokens;
    Matrix<double> uniforms;
};
BenchInputs make_bench_inputs(uint64_t seed, int gamma, size_t vocab);

// Runs the grid sequentially; when config.output_path is non-empty the report
// is also written there (throws with the path in the message on I/O failure).
BenchReport run_bench(const BenchConfig& config);

}  // namespace specsamp
