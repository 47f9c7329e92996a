// specbench: benchmark, validation and decode driver for the speculative
// sampling verification engine.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specsamp/ablate.hpp"
#include "specsamp/bench.hpp"
#include "specsamp/decode.hpp"
#include "specsamp/report.hpp"
#include "specsamp/stats.hpp"
#include "specsamp/toy_model.hpp"
#include "specsamp/validate.hpp"

namespace {

using namespace specsamp;

// Accepts "5" or "1..20" (inclusive).
std::vector<int> parse_gamma_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        return {std::stoi(text)};
    }
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (lo < 1 || hi < lo) {
        throw std::invalid_argument("bad gamma range: " + text);
    }
    std::vector<int> out;
    for (int g = lo; g <= hi; ++g) out.push_back(g);
    return out;
}

int cmd_bench(const std::vector<std::string>& backend_names, const std::vector<size_t>& vocabs,
              const std::string& gamma_text, size_t tile_n, double alpha, double beta,
              const std::vector<uint64_t>& seeds, const std::vector<unsigned>& workers,
              size_t trials, size_t warmup, const std::string& format, const std::string& out) {
    BenchConfig config;
    config.backends.clear();
    for (const auto& name : backend_names) {
        config.backends.push_back(parse_backend(name));
    }
    config.vocab_sizes = vocabs;
    config.gammas = parse_gamma_range(gamma_text);
    config.tile_width = tile_n;
    config.bounds = {alpha, beta};
    config.seeds = seeds;
    config.worker_counts = workers;
    config.trials = trials;
    config.warmup = warmup;
    config.format = parse_format(format);
    config.output_path = out;

    const auto report = run_bench(config);
    if (out.empty()) {
        write_bench_report(report.rows, "-", config.format);
    } else {
        std::fprintf(stderr, "wrote %zu rows to %s\n", report.rows.size(), out.c_str());
    }
    return 0;
}

int cmd_validate(const std::string& suite_name, uint64_t seed, uint64_t budget) {
    const auto suites = run_suite(suite_name, seed, budget);
    bool all_passed = true;
    for (const auto& suite : suites) {
        for (const auto& line : suite.checks) {
            std::printf("[%s] %s: %s\n", line.ok ? "ok" : "FAIL", suite.suite.c_str(),
                        line.text.c_str());
        }
        all_passed = all_passed && suite.passed;
    }
    std::printf("%s\n", all_passed ? "PASS" : "FAIL");
    return all_passed ? 0 : 1;
}

int cmd_decode(size_t vocab, uint64_t seed, int gamma, size_t max_len,
               const std::string& backend_name_, double divergence, double logit_scale,
               unsigned workers, size_t tile_n, double alpha, double beta, bool half) {
    const auto pair = make_model_pair(seed, vocab, divergence, logit_scale);
    DecodeConfig config;
    config.max_len = max_len;
    config.backend = parse_backend(backend_name_);
    config.gamma.gamma = gamma;
    config.workers = workers;
    config.tile_width = tile_n;
    config.bounds = {alpha, beta};
    config.emulate_half = half;
    config.seed = seed;

    const auto out = decode(pair.target, pair.draft, std::vector<int32_t>{0}, config);

    std::printf("tokens:");
    for (const auto t : out.tokens) std::printf(" %d", t);
    std::printf("\n");
    std::vector<double> ns(out.stats.verify_ns.begin(), out.stats.verify_ns.end());
    std::printf("steps=%llu drafted=%llu accepted=%llu accept_rate=%.4f mean_verify_ns=%.0f\n",
                static_cast<unsigned long long>(out.stats.steps),
                static_cast<unsigned long long>(out.stats.total_drafted),
                static_cast<unsigned long long>(out.stats.total_accepted),
                static_cast<double>(out.stats.total_accepted) /
                    static_cast<double>(out.stats.total_drafted),
                mean(ns));
    std::printf("gamma history:");
    for (const auto g : out.stats.gamma_history) std::printf(" %d", g);
    std::printf("\n");
    return 0;
}

int cmd_ablate(const std::string& profile, const std::vector<double>& scales, uint64_t seed,
               size_t num_seeds, size_t max_len, unsigned workers, const std::string& format,
               const std::string& out) {
    AblateConfig config = make_ablate_profile(profile);
    if (!scales.empty()) {
        config.magnitudes = scales;
    }
    config.seeds.clear();
    for (size_t s = 0; s < num_seeds; ++s) config.seeds.push_back(seed + s);
    config.max_len = max_len;
    config.workers = workers;
    config.format = parse_format(format);
    config.output_path = out;

    const auto report = ablate_scale(config);
    if (out.empty()) {
        write_ablate_report(report.rows, "-", config.format);
    } else {
        std::fprintf(stderr, "wrote %zu rows to %s\n", report.rows.size(), out.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"speculative sampling verification engine"};
    app.require_subcommand(1);

    // bench
    auto* bench = app.add_subcommand("bench", "time the verify step across a grid");
    std::vector<std::string> backends{"reference", "fused", "sigmoid"};
    std::vector<size_t> vocabs{32768};
    std::string gamma_text = "5";
    size_t tile_n = 1024;
    double alpha = -1e3, beta = 1e3;
    std::vector<uint64_t> seeds{1};
    std::vector<unsigned> workers{2};
    size_t trials = 30, warmup = 5;
    std::string format = "jsonl", out_path;
    bench->add_option("--backend", backends, "backends to run");
    bench->add_option("--vocab", vocabs, "vocabulary sizes");
    bench->add_option("--gamma", gamma_text, "draft length, single value or range like 1..20");
    bench->add_option("--tile-n", tile_n, "tile width");
    bench->add_option("--alpha", alpha, "sigmoid lower bound");
    bench->add_option("--beta", beta, "sigmoid upper bound");
    bench->add_option("--seed", seeds, "seeds");
    bench->add_option("--workers", workers, "worker counts");
    bench->add_option("--trials", trials, "timed iterations per grid point");
    bench->add_option("--warmup", warmup, "warmup iterations per grid point");
    bench->add_option("--format", format, "csv or jsonl");
    bench->add_option("--out", out_path, "output path (default stdout)");

    // validate
    auto* validate = app.add_subcommand("validate", "run a statistical validation suite");
    std::string suite;
    uint64_t vseed = 1;
    uint64_t budget = 100000;
    validate->add_option("--suite", suite, "distribution|acceptance|oracle|memory|gamma")
        ->required();
    validate->add_option("--seed", vseed, "seed");
    validate->add_option("--trials", budget, "trial/instance budget");

    // decode
    auto* dec = app.add_subcommand("decode", "run the speculative decode loop on toy models");
    size_t dvocab = 64, dmax_len = 64, dtile_n = 1024;
    uint64_t dseed = 1;
    int dgamma = 5;
    std::string dbackend = "reference";
    double ddivergence = 1.0, dlogit_scale = 4.0, dalpha = -1e3, dbeta = 1e3;
    unsigned dworkers = 2;
    bool dhalf = false;
    dec->add_option("--vocab", dvocab, "vocabulary size");
    dec->add_option("--seed", dseed, "seed");
    dec->add_option("--gamma", dgamma, "initial draft length");
    dec->add_option("--max-len", dmax_len, "tokens to emit");
    dec->add_option("--backend", dbackend, "reference|fused|sigmoid");
    dec->add_option("--divergence", ddivergence, "draft model perturbation stddev");
    dec->add_option("--logit-scale", dlogit_scale, "toy model logit scale");
    dec->add_option("--workers", dworkers, "worker count");
    dec->add_option("--tile-n", dtile_n, "tile width");
    dec->add_option("--alpha", dalpha, "sigmoid lower bound");
    dec->add_option("--beta", dbeta, "sigmoid upper bound");
    dec->add_flag("--half", dhalf, "emulate half-precision activations (sigmoid backend)");

    // ablate-scale
    auto* abl = app.add_subcommand("ablate-scale", "sweep sigmoid bounds against the exact backend");
    std::string profile = "asr";
    std::vector<double> scales;
    uint64_t aseed = 1;
    size_t anum_seeds = 5, amax_len = 128;
    unsigned aworkers = 2;
    std::string aformat = "jsonl", aout;
    abl->add_option("--profile", profile, "asr or text");
    abl->add_option("--scales", scales, "bound magnitudes m for (-m, +m); default 10 1e3 1e4 1e5");
    abl->add_option("--seed", aseed, "base seed");
    abl->add_option("--num-seeds", anum_seeds, "number of seeds");
    abl->add_option("--max-len", amax_len, "tokens per decode");
    abl->add_option("--workers", aworkers, "worker count");
    abl->add_option("--format", aformat, "csv or jsonl");
    abl->add_option("--out", aout, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            return cmd_bench(backends, vocabs, gamma_text, tile_n, alpha, beta, seeds, workers,
                             trials, warmup, format, out_path);
        }
        if (validate->parsed()) {
            return cmd_validate(suite, vseed, budget);
        }
        if (dec->parsed()) {
            return cmd_decode(dvocab, dseed, dgamma, dmax_len, dbackend, ddivergence, dlogit_scale,
                              dworkers, dtile_n, dalpha, dbeta, dhalf);
        }
        if (abl->parsed()) {
            return cmd_ablate(profile, scales, aseed, anum_seeds, amax_len, aworkers, aformat, aout);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
