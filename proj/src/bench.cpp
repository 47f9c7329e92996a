#include "specsamp/bench.hpp"

#include <chrono>
#include <stdexcept>

#include "specsamp/activation.hpp"
#include "specsamp/rng.hpp"
#include "specsamp/stats.hpp"
#include "specsamp/verify_fused.hpp"
#include "specsamp/verify_reference.hpp"

namespace specsamp {

void BenchConfig::validate() const {
    if (backends.empty() || vocab_sizes.empty() || gammas.empty() || seeds.empty() ||
        worker_counts.empty()) {
        throw std::invalid_argument("bench config: every grid axis must be non-empty");
    }
    for (size_t v : vocab_sizes) {
        if (v < 1) throw std::invalid_argument("bench config: vocab must be >= 1");
    }
    for (int g : gammas) {
        if (g < 1) throw std::invalid_argument("bench config: gamma must be >= 1");
    }
    for (unsigned w : worker_counts) {
        if (w < 1) throw std::invalid_argument("bench config: workers must be >= 1");
    }
    if (tile_width < 1) throw std::invalid_argument("bench config: tile_n must be >= 1");
    if (trials < 1) throw std::invalid_argument("bench config: trials must be >= 1");
    bounds.validate();
}

namespace {

constexpr double kBenchLogitScale = 4.0;
constexpr double kBenchDraftJitter = 1.0;

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point a, Clock::time_point b) {
    return static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

}  // namespace

BenchInputs make_bench_inputs(uint64_t seed, int gamma, size_t vocab) {
    const auto g = static_cast<size_t>(gamma);
    BenchInputs in;
    in.z_p = LogitTensor(1, g + 1, vocab);
    in.z_q = LogitTensor(1, g, vocab);
    in.draft_tokens = Matrix<int32_t>(1, g);
    in.uniforms = Matrix<double>(1, g + 1);

    CounterRng rng(seed);
    for (double& v : in.z_p.flat()) {
        v = kBenchLogitScale * rng.next_normal();
    }
    for (size_t c = 0; c < g; ++c) {
        const auto p_row = in.z_p.row(0, c);
        const auto q_row = in.z_q.row(0, c);
        for (size_t i = 0; i < vocab; ++i) {
            q_row[i] = p_row[i] + kBenchDraftJitter * rng.next_normal();
        }
    }
    std::vector<double> prob(vocab);
    for (size_t c = 0; c < g; ++c) {
        stable_softmax_into(in.z_q.row(0, c), prob);
        in.draft_tokens(0, c) = detail::sample_row(prob, rng.next_uniform());
    }
    for (size_t c = 0; c <= g; ++c) {
        in.uniforms(0, c) = rng.next_uniform();
    }
    return in;
}

namespace {

struct PointMeasurement {
    std::vector<double> verify_ns;
    std::vector<double> total_ns;
    double accept_rate = 0.0;
    MemoryTrace trace;
};

PointMeasurement measure_point(Backend backend, const BenchInputs& in, const TilePlan& plan,
                               WorkerPool& pool, ScaleBounds bounds, size_t trials,
                               size_t warmup) {
    PointMeasurement m;
    m.verify_ns.reserve(trials);
    m.total_ns.reserve(trials);
    const size_t gamma = in.z_q.steps();

    VerificationResult last;
    if (backend == Backend::sigmoid) {
        SigmoidStepInputs inputs;
        inputs.z_p = in.z_p;
        inputs.z_q = in.z_q;
        inputs.bounds = bounds;
        inputs.draft_tokens = in.draft_tokens;
        inputs.uniforms = in.uniforms;
        for (size_t it = 0; it < warmup + trials; ++it) {
            const auto t0 = Clock::now();
            auto out = verify_sigmoid_fused(inputs, plan, pool);
            const auto t1 = Clock::now();
            if (it >= warmup) {
                m.verify_ns.push_back(elapsed_ns(t0, t1));
                m.total_ns.push_back(elapsed_ns(t0, t1));
            }
            last = std::move(out.result);
            m.trace = out.trace;
        }
    } else {
        StepInputs inputs;
        inputs.draft_tokens = in.draft_tokens;
        inputs.uniforms = in.uniforms;
        for (size_t it = 0; it < warmup + trials; ++it) {
            if (backend == Backend::reference) {
                const auto t0 = Clock::now();
                materialize_softmax_into(in.z_p, inputs.p);
                materialize_softmax_into(in.z_q, inputs.q);
                const auto t1 = Clock::now();
                last = verify_sequential(inputs);
                const auto t2 = Clock::now();
                if (it >= warmup) {
                    m.verify_ns.push_back(elapsed_ns(t1, t2));
                    m.total_ns.push_back(elapsed_ns(t0, t2));
                }
            } else {
                const auto t0 = Clock::now();
                materialize_softmax_into(in.z_p, inputs.p, pool);
                materialize_softmax_into(in.z_q, inputs.q, pool);
                const auto t1 = Clock::now();
                auto out = verify_fused(inputs, plan, pool);
                const auto t2 = Clock::now();
                if (it >= warmup) {
                    m.verify_ns.push_back(elapsed_ns(t1, t2));
                    m.total_ns.push_back(elapsed_ns(t0, t2));
                }
                last = std::move(out.result);
                m.trace = out.trace;
            }
        }
    }

    double accepted = 0.0;
    for (int32_t len : last.accepted_len) {
        accepted += static_cast<double>(len);
    }
    m.accept_rate = accepted / static_cast<double>(last.accepted_len.size() * gamma);
    return m;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
    config.validate();
    BenchReport report;

    for (size_t vocab : config.vocab_sizes) {
        for (int gamma : config.gammas) {
            for (uint64_t seed : config.seeds) {
                for (unsigned workers : config.worker_counts) {
                    const BenchInputs inputs = make_bench_inputs(seed, gamma, vocab);
                    const TilePlan plan = plan_tiles(vocab, std::min(config.tile_width, vocab));
                    WorkerPool pool(workers);

                    std::optional<double> reference_total;
                    for (Backend backend : config.backends) {
                        const auto m = measure_point(backend, inputs, plan, pool, config.bounds,
                                                     config.trials, config.warmup);
                        BenchRow row;
                        row.backend = backend_name(backend);
                        row.vocab = vocab;
                        row.gamma = gamma;
                        row.tile_n = plan.tile_width;
                        row.workers = workers;
                        row.batch = 1;
                        row.seed = seed;
                        row.alpha = config.bounds.alpha;
                        row.beta = config.bounds.beta;
                        row.trials = config.trials;
                        row.warmup = config.warmup;
                        row.accept_rate = m.accept_rate;
                        row.verify_ns_median = median(m.verify_ns);
                        row.verify_ns_mean = mean(m.verify_ns);
                        row.verify_ns_stddev = stddev(m.verify_ns);
                        row.total_ns_median = median(m.total_ns);
                        row.total_ns_mean = mean(m.total_ns);
                        row.total_ns_stddev = stddev(m.total_ns);
                        row.trace = m.trace;
                        row.peak_rss_bytes = peak_rss_bytes();
                        if (backend == Backend::reference) {
                            reference_total = row.total_ns_median;
                        }
                        if (reference_total && *reference_total > 0.0) {
                            row.rel_improvement_pct =
                                100.0 * (*reference_total - row.total_ns_median) / *reference_total;
                        }
                        report.rows.push_back(std::move(row));
                    }
                }
            }
        }
    }

    if (!config.output_path.empty()) {
        write_bench_report(report.rows, config.output_path, config.format);
    }
    return report;
}

}  // namespace specsamp
