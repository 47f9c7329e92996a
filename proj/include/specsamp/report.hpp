#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specsamp/tile.hpp"

namespace specsamp {

enum class ReportFormat { csv, jsonl };
ReportFormat parse_format(const std::string& name);  // throws on unknown

// One benchmark grid point. Column order and field names are fixed; see
// bench_csv_header() and the README schema table.
struct BenchRow {
    std::string backend;
    size_t vocab = 0;
    int gamma = 0;
    size_t tile_n = 0;
    unsigned workers = 0;
    size_t batch = 1;
    uint64_t seed = 0;
    double alpha = 0.0;
    double beta = 0.0;
    size_t trials = 0;
    size_t warmup = 0;
    double accept_rate = 0.0;
    double verify_ns_median = 0.0;
    double verify_ns_mean = 0.0;
    double verify_ns_stddev = 0.0;
    double total_ns_median = 0.0;  // activation + verify
    double total_ns_mean = 0.0;
    double total_ns_stddev = 0.0;
    std::optional<double> rel_improvement_pct;  // vs reference total median; empty without one
    MemoryTrace trace;                          // all-zero for the reference backend
    uint64_t peak_rss_bytes = 0;
};

struct AblateRow {
    std::string profile;
    double alpha = 0.0;
    double beta = 0.0;
    std::string precision;  // "full" or "half"
    size_t seeds = 0;
    size_t max_len = 0;
    double accept_rate_mean = 0.0;
    double verify_ns_mean = 0.0;
    double divergence_mean = 0.0;  // normalized edit distance vs the exact backend
};

std::string bench_csv_header();
std::string bench_row_csv(const BenchRow& row);
std::string bench_row_json(const BenchRow& row);

std::string ablate_csv_header();
std::string ablate_row_csv(const AblateRow& row);
std::string ablate_row_json(const AblateRow& row);

// RFC 4180 field quoting.
std::string csv_escape(const std::string& field);

// Writes rows to `path` ("-" for stdout). Throws std::runtime_error naming the
// path when it cannot be opened.
void write_bench_report(const std::vector<BenchRow>& rows, const std::string& path,
                        ReportFormat format);
void write_ablate_report(const std::vector<AblateRow>& rows, const std::string& path,
                         ReportFormat format);

}  // namespace specsamp
