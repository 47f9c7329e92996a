#include "specsamp/ablate.hpp"

#include <stdexcept>

#include "specsamp/decode.hpp"
#include "specsamp/stats.hpp"
#include "specsamp/toy_model.hpp"

namespace specsamp {

void AblateConfig::validate() const {
    if (magnitudes.empty() || seeds.empty()) {
        throw std::invalid_argument("ablate config: magnitude and seed grids must be non-empty");
    }
    for (double m : magnitudes) {
        ScaleBounds{-m, m}.validate();  // rejects m <= 0 (alpha == beta included)
    }
    if (vocab < 2) throw std::invalid_argument("ablate config: vocab must be >= 2");
    if (max_len < 1) throw std::invalid_argument("ablate config: max_len must be >= 1");
    if (logit_scale <= 0.0 || model_divergence < 0.0) {
        throw std::invalid_argument("ablate config: bad model profile parameters");
    }
}

AblateConfig make_ablate_profile(const std::string& name) {
    AblateConfig config;
    config.profile = name;
    if (name == "asr") {
        config.vocab = 127;
        config.logit_scale = 8000.0;
        config.model_divergence = 3000.0;
    } else if (name == "text") {
        config.vocab = 257;
        config.logit_scale = 8000.0;
        config.model_divergence = 2000.0;
    } else {
        throw std::invalid_argument("unknown ablation profile: " + name);
    }
    return config;
}

AblateReport ablate_scale(const AblateConfig& config) {
    config.validate();
    AblateReport report;

    // One exact transcript per seed; every sigmoid variant is scored against it.
    std::vector<std::vector<int32_t>> exact_transcripts;
    const std::vector<int32_t> prompt{0};
    for (uint64_t seed : config.seeds) {
        const auto pair =
            make_model_pair(seed, config.vocab, config.model_divergence, config.logit_scale);
        DecodeConfig dc;
        dc.max_len = config.max_len;
        dc.backend = Backend::fused;
        dc.gamma.gamma = config.initial_gamma;
        dc.workers = config.workers;
        dc.seed = seed;
        exact_transcripts.push_back(decode(pair.target, pair.draft, prompt, dc).tokens);
    }

    for (double magnitude : config.magnitudes) {
        for (const bool half : {false, true}) {
            std::vector<double> accept_rates, verify_means, divergences;
            for (size_t s = 0; s < config.seeds.size(); ++s) {
                const uint64_t seed = config.seeds[s];
                const auto pair = make_model_pair(seed, config.vocab, config.model_divergence,
                                                  config.logit_scale);
                DecodeConfig dc;
                dc.max_len = config.max_len;
                dc.backend = Backend::sigmoid;
                dc.gamma.gamma = config.initial_gamma;
                dc.workers = config.workers;
                dc.bounds = ScaleBounds{-magnitude, magnitude};
                dc.emulate_half = half;
                dc.seed = seed;
                const auto out = decode(pair.target, pair.draft, prompt, dc);

                accept_rates.push_back(static_cast<double>(out.stats.total_accepted) /
                                       static_cast<double>(out.stats.total_drafted));
                std::vector<double> ns(out.stats.verify_ns.begin(), out.stats.verify_ns.end());
                verify_means.push_back(mean(ns));
                divergences.push_back(
                    normalized_edit_distance(out.tokens, exact_transcripts[s]));
            }
            AblateRow row;
            row.profile = config.profile;
            row.alpha = -magnitude;
            row.beta = magnitude;
            row.precision = half ? "half" : "full";
            row.seeds = config.seeds.size();
            row.max_len = config.max_len;
            row.accept_rate_mean = mean(accept_rates);
            row.verify_ns_mean = mean(verify_means);
            row.divergence_mean = mean(divergences);
            report.rows.push_back(std::move(row));
        }
    }

    if (!config.output_path.empty()) {
        write_ablate_report(report.rows, config.output_path, config.format);
    }
    return report;
}

}  // namespace specsamp
