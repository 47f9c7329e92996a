#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specsamp/dist.hpp"
#include "specsamp/toy_model.hpp"

namespace specsamp {

enum class Backend { reference, fused, sigmoid };

// Throws std::invalid_argument on unknown names.
Backend parse_backend(const std::string& name);
const char* backend_name(Backend backend);

// Adaptive draft-length controller: +2 on a fully accepted step, -1 otherwise,
// clamped to [min_gamma, max_gamma].
struct GammaState {
    int gamma = 5;
    int min_gamma = 1;
    int max_gamma = 64;
};
GammaState gamma_update(GammaState state, bool all_accepted);

struct DecodeConfig {
    size_t max_len = 64;
    Backend backend = Backend::reference;
    GammaState gamma{};
    unsigned workers = 1;
    size_t tile_width = 1024;
    ScaleBounds bounds{-1e3, 1e3};  // sigmoid backend only
    bool emulate_half = false;      // sigmoid backend only
    uint64_t seed = 0;
};

struct DecodeStats {
    uint64_t tokens_emitted = 0;
    uint64_t steps = 0;
    uint64_t total_drafted = 0;
    uint64_t total_accepted = 0;
    std::vector<int> gamma_history;           // gamma in effect at each step
    std::vector<uint8_t> all_accepted_history;
    std::vector<uint64_t> verify_ns;          // verify call duration per step
};

struct DecodeOutput {
    std::vector<int32_t> tokens;
    DecodeStats stats;
};

// Speculative decode loop (B = 1). Per step: gamma tokens are drafted
// autoregressively from the draft model, the target scores gamma + 1
// positions, the selected backend verifies, and the accepted prefix plus the
// resampled/bonus token is emitted. All random draws come from one counter
// stream in a fixed order -- gamma draft draws, gamma acceptance draws, one
// final draw -- so transcripts from exact backends are directly comparable.
DecodeOutput decode(const ToyModel& target, const ToyModel& draft,
                    std::span<const int32_t> prompt, const DecodeConfig& config);

}  // namespace specsamp
