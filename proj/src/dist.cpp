#include "specsamp/dist.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specsamp/half.hpp"

namespace specsamp {

void ScaleBounds::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("ScaleBounds: require alpha < 0 < beta, both finite");
    }
}

double stable_sigmoid(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

void require_finite(std::span<const double> logits) {
    if (logits.empty()) {
        throw std::invalid_argument("logit row must be non-empty");
    }
    for (double v : logits) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("logit row contains a non-finite value");
        }
    }
}

}  // namespace

void stable_softmax_into(std::span<const double> logits, std::span<double> out) {
    require_finite(logits);
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double denom = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        denom += out[i];
    }
    for (size_t i = 0; i < logits.size(); ++i) {
        out[i] /= denom;
    }
}

ProbRow stable_softmax(std::span<const double> logits) {
    ProbRow row;
    row.values.resize(logits.size());
    stable_softmax_into(logits, row.values);
    return row;
}

double sigmoid_scaled_value(double z, ScaleBounds bounds) {
    return stable_sigmoid((z - bounds.alpha) / bounds.width());
}

double sigmoid_scaled_value_half(double z, ScaleBounds bounds) {
    const double inv_width = round_to_half(1.0 / bounds.width());
    const double shifted = round_to_half(round_to_half(z) - round_to_half(bounds.alpha));
    const double arg = round_to_half(shifted * inv_width);
    return round_to_half(stable_sigmoid(arg));
}

ProbRow sigmoid_scaled(std::span<const double> logits, ScaleBounds bounds) {
    bounds.validate();
    require_finite(logits);
    ProbRow row;
    row.normalized = false;
    row.values.resize(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
        row.values[i] = sigmoid_scaled_value(logits[i], bounds);
    }
    return row;
}

MaxNormResult max_norm(std::span<const double> f) {
    MaxNormResult out;
    out.dist.values.assign(f.size(), 0.0);
    double denom = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        const double a = std::max(0.0, f[i]);
        out.dist.values[i] = a;
        denom += a;
    }
    out.denom = denom;
    if (denom <= kZeroEps) {
        out.dist.degenerate = true;
        std::fill(out.dist.values.begin(), out.dist.values.end(), 0.0);
        return out;
    }
    for (double& v : out.dist.values) {
        v /= denom;
    }
    return out;
}

double ratio_clamped(double p, double q) {
    if (p < 0.0 || q < 0.0) {
        throw std::invalid_argument("ratio_clamped: inputs must be non-negative");
    }
    if (q <= kZeroEps) {
        return p > kZeroEps ? 1.0 : 0.0;
    }
    return std::min(1.0, p / q);
}

double sequential_sum(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum;
}

size_t scan_categorical(std::span<const double> values, double denom, double u) {
    double cum = 0.0;
    size_t last_positive = 0;
    bool saw_positive = false;
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0) {
            last_positive = i;
            saw_positive = true;
        }
        cum += values[i] / denom;
        if (u < cum) {
            return i;
        }
    }
    return saw_positive ? last_positive : 0;
}

}  // namespace specsamp
