#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specsamp/report.hpp"

namespace specsamp {

// Scale ablation: decode with the sigmoid backend across a grid of symmetric
// bounds (-m, +m), in full precision and in the half-precision emulation, and
// measure how far each transcript drifts from the exact backend's on the same
// seeds. Profiles pick toy-model parameters whose logit range is meaningful
// against the bounds grid.
struct AblateConfig {
    std::string profile = "asr";  // "asr" or "text"
    std::vector<double> magnitudes{1e1, 1e3, 1e4, 1e5};
    std::vector<uint64_t> seeds{1, 2, 3, 4, 5};
    size_t vocab = 127;
    size_t max_len = 128;
    double logit_scale = 8000.0;
    double model_divergence = 3000.0;
    int initial_gamma = 5;
    unsigned workers = 1;
    std::string output_path;
    ReportFormat format = ReportFormat::jsonl;

    void validate() const;  // throws std::invalid_argument (e.g. magnitude <= 0)
};

// Profile defaults; throws on unknown names.
AblateConfig make_ablate_profile(const std::string& name);

struct AblateReport {
    std::vector<AblateRow> rows;
};

AblateReport ablate_scale(const AblateConfig& config);

}  // namespace specsamp
