#include "specsamp/stats.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace specsamp {

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double sq = 0.0;
    for (double v : values) sq += (v - m) * (v - m);
    return std::sqrt(sq / static_cast<double>(values.size() - 1));
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double hi = values[mid];
    if (values.size() % 2 == 0) {
        const double lo = *std::max_element(values.begin(), values.begin() + mid);
        return 0.5 * (lo + hi);
    }
    return hi;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("total_variation: supports differ");
    }
    double sum = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return 0.5 * sum;
}

double chi_square_statistic(std::span<const uint64_t> observed,
                            std::span<const double> expected_probs) {
    if (observed.size() != expected_probs.size()) {
        throw std::invalid_argument("chi_square_statistic: supports differ");
    }
    uint64_t total = 0;
    for (uint64_t o : observed) total += o;
    double stat = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_probs[i] * static_cast<double>(total);
        if (e <= 0.0) {
            if (observed[i] > 0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double d = static_cast<double>(observed[i]) - e;
        stat += d * d / e;
    }
    return stat;
}

double chi_square_p_value(double statistic, unsigned dof) {
    const boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double normalized_edit_distance(std::span<const int32_t> a, std::span<const int32_t> b) {
    const size_t n = a.size(), m = b.size();
    if (n == 0 && m == 0) return 0.0;
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

uint64_t peak_rss_bytes() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    // Linux reports ru_maxrss in kilobytes.
    return static_cast<uint64_t>(usage.ru_maxrss) * 1024ull;
}

}  // namespace specsamp
