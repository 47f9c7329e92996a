#include "specsamp/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace specsamp {

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "jsonl") return ReportFormat::jsonl;
    throw std::invalid_argument("unknown output format: " + name);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string bench_csv_header() {
    return "backend,vocab,gamma,tile_n,workers,batch,seed,alpha,beta,trials,warmup,"
           "accept_rate,verify_ns_median,verify_ns_mean,verify_ns_stddev,"
           "total_ns_median,total_ns_mean,total_ns_stddev,rel_improvement_pct,"
           "hbm_elem_reads_p,hbm_elem_reads_q,hbm_elem_writes,kernel_invocations,"
           "peak_tile_bytes,peak_rss_bytes";
}

std::string bench_row_csv(const BenchRow& r) {
    std::ostringstream os;
    os << csv_escape(r.backend) << ',' << r.vocab << ',' << r.gamma << ',' << r.tile_n << ','
       << r.workers << ',' << r.batch << ',' << r.seed << ',' << fmt(r.alpha) << ','
       << fmt(r.beta) << ',' << r.trials << ',' << r.warmup << ',' << fmt(r.accept_rate) << ','
       << fmt(r.verify_ns_median) << ',' << fmt(r.verify_ns_mean) << ','
       << fmt(r.verify_ns_stddev) << ',' << fmt(r.total_ns_median) << ','
       << fmt(r.total_ns_mean) << ',' << fmt(r.total_ns_stddev) << ','
       << (r.rel_improvement_pct ? fmt(*r.rel_improvement_pct) : "") << ','
       << r.trace.hbm_elem_reads_p << ',' << r.trace.hbm_elem_reads_q << ','
       << r.trace.hbm_elem_writes << ',' << r.trace.kernel_invocations << ','
       << r.trace.peak_tile_bytes << ',' << r.peak_rss_bytes;
    return os.str();
}

std::string bench_row_json(const BenchRow& r) {
    nlohmann::json j{
        {"backend", r.backend},
        {"vocab", r.vocab},
        {"gamma", r.gamma},
        {"tile_n", r.tile_n},
        {"workers", r.workers},
        {"batch", r.batch},
        {"seed", r.seed},
        {"alpha", r.alpha},
        {"beta", r.beta},
        {"trials", r.trials},
        {"warmup", r.warmup},
        {"accept_rate", r.accept_rate},
        {"verify_ns_median", r.verify_ns_median},
        {"verify_ns_mean", r.verify_ns_mean},
        {"verify_ns_stddev", r.verify_ns_stddev},
        {"total_ns_median", r.total_ns_median},
        {"total_ns_mean", r.total_ns_mean},
        {"total_ns_stddev", r.total_ns_stddev},
        {"hbm_elem_reads_p", r.trace.hbm_elem_reads_p},
        {"hbm_elem_reads_q", r.trace.hbm_elem_reads_q},
        {"hbm_elem_writes", r.trace.hbm_elem_writes},
        {"kernel_invocations", r.trace.kernel_invocations},
        {"peak_tile_bytes", r.trace.peak_tile_bytes},
        {"peak_rss_bytes", r.peak_rss_bytes},
    };
    if (r.rel_improvement_pct) {
        j["rel_improvement_pct"] = *r.rel_improvement_pct;
    } else {
        j["rel_improvement_pct"] = nullptr;
    }
    return j.dump();
}

std::string ablate_csv_header() {
    return "profile,alpha,beta,precision,seeds,max_len,accept_rate_mean,verify_ns_mean,"
           "divergence_mean";
}

std::string ablate_row_csv(const AblateRow& r) {
    std::ostringstream os;
    os << csv_escape(r.profile) << ',' << fmt(r.alpha) << ',' << fmt(r.beta) << ','
       << csv_escape(r.precision) << ',' << r.seeds << ',' << r.max_len << ','
       << fmt(r.accept_rate_mean) << ',' << fmt(r.verify_ns_mean) << ','
       << fmt(r.divergence_mean);
    return os.str();
}

std::string ablate_row_json(const AblateRow& r) {
    const nlohmann::json j{
        {"profile", r.profile},
        {"alpha", r.alpha},
        {"beta", r.beta},
        {"precision", r.precision},
        {"seeds", r.seeds},
        {"max_len", r.max_len},
        {"accept_rate_mean", r.accept_rate_mean},
        {"verify_ns_mean", r.verify_ns_mean},
        {"divergence_mean", r.divergence_mean},
    };
    return j.dump();
}

namespace {

template <typename Row>
void write_rows(const std::vector<Row>& rows, const std::string& path, ReportFormat format,
                std::string (*header)(), std::string (*to_csv)(const Row&),
                std::string (*to_json)(const Row&)) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (path != "-") {
        file.open(path, std::ios::out | std::ios::trunc);
        if (!file) {
            throw std::runtime_error("cannot open output file: " + path);
        }
        out = &file;
    }
    if (format == ReportFormat::csv) {
        *out << header() << '\n';
        for (const auto& row : rows) *out << to_csv(row) << '\n';
    } else {
        for (const auto& row : rows) *out << to_json(row) << '\n';
    }
    out->flush();
    if (out->fail()) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

}  // namespace

void write_bench_report(const std::vector<BenchRow>& rows, const std::string& path,
                        ReportFormat format) {
    write_rows(rows, path, format, bench_csv_header, bench_row_csv, bench_row_json);
}

void write_ablate_report(const std::vector<AblateRow>& rows, const std::string& path,
                         ReportFormat format) {
    write_rows(rows, path, format, ablate_csv_header, ablate_row_csv, ablate_row_json);
}

}  // namespace specsamp
