#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specsamp {

double mean(std::span<const double> values);
double stddev(std::span<const double> values);  // sample stddev, 0 for n < 2
double median(std::vector<double> values);      // by value: sorts its copy

// Total variation distance between two distributions over the same support:
// 0.5 * sum |p_i - q_i|.
double total_variation(std::span<const double> p, std::span<const double> q);

// Pearson chi-square statistic of observed counts against expected
// probabilities (expected count = prob * total).
double chi_square_statistic(std::span<const uint64_t> observed, std::span<const double> expected_probs);

// Upper-tail p-value of the chi-square distribution with `dof` degrees of
// freedom.
double chi_square_p_value(double statistic, unsigned dof);

// Levenshtein distance normalized by the longer length; 0 for two empty
// sequences.
double normalized_edit_distance(std::span<const int32_t> a, std::span<const int32_t> b);

// High-water resident set size of this process, in bytes.
uint64_t peak_rss_bytes();

}  // namespace specsamp
