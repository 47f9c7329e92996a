#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specsamp/step.hpp"

namespace specsamp {

struct CheckLine {
    bool ok;
    std::string text;
};

struct SuiteResult {
    std::string suite;
    bool passed = true;
    std::vector<CheckLine> checks;

    SuiteResult() = default;
    explicit SuiteResult(std::string name) : suite(std::move(name)) {}

    void check(bool ok, std::string text) {
        passed = passed && ok;
        checks.push_back({ok, std::move(text)});
    }
};

// Compares two verification results: decisions and tokens must be identical,
// tau and the residual denominator within `tol`. On mismatch an explanation is
// appended to *why when provided.
bool results_match(const VerificationResult& a, const VerificationResult& b, double tol,
                   std::string* why = nullptr);

// Named statistical/certification suites (the CLI's `validate` subcommand).
// `budget` is the Monte Carlo trial count or the instance count, depending on
// the suite; each suite enforces its own minimum.
SuiteResult run_distribution_suite(uint64_t seed, uint64_t trials);
SuiteResult run_acceptance_suite(uint64_t seed, uint64_t trials);
SuiteResult run_oracle_exact_suite(uint64_t seed, size_t instances);
SuiteResult run_oracle_sigmoid_suite(uint64_t seed, size_t instances);
SuiteResult run_memory_suite(uint64_t seed);
SuiteResult run_gamma_suite(uint64_t seed);

// Extra certification runs used by the acceptance suite.
SuiteResult run_determinism_suite(uint64_t seed, size_t num_seeds);
SuiteResult run_scale_limit_suite(uint64_t seed, uint64_t trials);

// Dispatch by CLI suite name {distribution, acceptance, oracle, memory,
// gamma}; throws std::invalid_argument for unknown names.
std::vector<SuiteResult> run_suite(const std::string& name, uint64_t seed, uint64_t budget);

}  // namespace specsamp
