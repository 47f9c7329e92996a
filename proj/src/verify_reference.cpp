#include "specsamp/verify_reference.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specsamp/dist.hpp"

namespace specsamp {

void StepInputs::validate() const {
    const size_t b = q.batch(), g = q.steps(), v = q.vocab();
    if (p.batch() != b || p.vocab() != v || (p.steps() != g && p.steps() != g + 1)) {
        throw std::invalid_argument("StepInputs: p must be B x gamma(+1) x V matching q");
    }
    if (draft_tokens.rows() != b || draft_tokens.cols() != g) {
        throw std::invalid_argument("StepInputs: draft_tokens must be B x gamma");
    }
    if (uniforms.rows() != b || uniforms.cols() != g + 1) {
        throw std::invalid_argument("StepInputs: uniforms must be B x (gamma+1)");
    }
    for (size_t r = 0; r < b; ++r) {
        for (size_t c = 0; c < g; ++c) {
            const int32_t t = draft_tokens(r, c);
            if (t < 0 || static_cast<size_t>(t) >= v) {
                throw std::invalid_argument("StepInputs: draft token out of vocabulary range");
            }
        }
        for (size_t c = 0; c <= g; ++c) {
            const double u = uniforms(r, c);
            if (!(u >= 0.0) || !(u < 1.0)) {
                throw std::invalid_argument("StepInputs: uniforms must lie in [0, 1)");
            }
        }
    }
}

namespace detail {

int32_t sample_row(std::span<const double> row, double u) {
    const double denom = sequential_sum(row);
    return static_cast<int32_t>(scan_categorical(row, denom, u));
}

ResampleOutcome resample_with_denom(std::span<const double> p_row,
                                    std::span<const double> q_row,
                                    double u) {
    ResampleOutcome out{};
    std::vector<double> residual(p_row.size());
    double denom = 0.0;
    for (size_t i = 0; i < p_row.size(); ++i) {
        const double a = std::max(0.0, p_row[i] - q_row[i]);
        residual[i] = a;
        denom += a;
    }
    out.denom = denom;
    if (denom <= kZeroEps) {
        out.used_fallback = true;
        out.token = sample_row(p_row, u);
        return out;
    }
    out.used_fallback = false;
    out.token = static_cast<int32_t>(scan_categorical(residual, denom, u));
    return out;
}

}  // namespace detail

int32_t resample_adjusted(std::span<const double> p_row, std::span<const double> q_row, double u) {
    if (p_row.size() != q_row.size()) {
        throw std::invalid_argument("resample_adjusted: rows must have equal length");
    }
    return detail::resample_with_denom(p_row, q_row, u).token;
}

VerificationResult verify_sequential(const StepInputs& inputs) {
    inputs.validate();
    const size_t batch = inputs.batch(), gamma = inputs.gamma();

    VerificationResult result;
    result.accepted_len.assign(batch, 0);
    result.tau = Matrix<double>(batch, gamma);
    result.final_token.assign(batch, kNoToken);
    result.resample_used.assign(batch, 0);
    result.residual_denom.assign(batch, 0.0);

    for (size_t b = 0; b < batch; ++b) {
        for (size_t c = 0; c < gamma; ++c) {
            const auto token = static_cast<size_t>(inputs.draft_tokens(b, c));
            result.tau(b, c) = ratio_clamped(inputs.p.row(b, c)[token], inputs.q.row(b, c)[token]);
        }

        size_t accepted = 0;
        while (accepted < gamma && inputs.uniforms(b, accepted) <= result.tau(b, accepted)) {
            ++accepted;
        }
        result.accepted_len[b] = static_cast<int32_t>(accepted);

        const double u_final = inputs.uniforms(b, gamma);
        if (accepted < gamma) {
            const auto outcome =
                detail::resample_with_denom(inputs.p.row(b, accepted), inputs.q.row(b, accepted), u_final);
            result.final_token[b] = outcome.token;
            result.resample_used[b] = 1;
            result.residual_denom[b] = outcome.used_fallback ? 0.0 : outcome.denom;
        } else if (inputs.has_bonus_row()) {
            result.final_token[b] = detail::sample_row(inputs.p.row(b, gamma), u_final);
        }
    }
    return result;
}

}  // namespace specsamp
