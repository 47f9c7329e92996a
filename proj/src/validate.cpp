#include "specsamp/validate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "specsamp/decode.hpp"
#include "specsamp/dist.hpp"
#include "specsamp/rng.hpp"
#include "specsamp/stats.hpp"
#include "specsamp/tile.hpp"
#include "specsamp/toy_model.hpp"
#include "specsamp/verify_fused.hpp"
#include "specsamp/verify_reference.hpp"
#include "specsamp/verify_sigmoid.hpp"

namespace specsamp {

bool results_match(const VerificationResult& a, const VerificationResult& b, double tol,
                   std::string* why) {
    auto fail = [&](const std::string& what) {
        if (why) *why += what;
        return false;
    };
    if (a.accepted_len != b.accepted_len) return fail("accepted_len differs");
    if (a.final_token != b.final_token) return fail("final_token differs");
    if (a.resample_used != b.resample_used) return fail("resample_used differs");
    if (a.tau.rows() != b.tau.rows() || a.tau.cols() != b.tau.cols()) {
        return fail("tau shape differs");
    }
    for (size_t r = 0; r < a.tau.rows(); ++r) {
        for (size_t c = 0; c < a.tau.cols(); ++c) {
            if (std::abs(a.tau(r, c) - b.tau(r, c)) > tol) return fail("tau out of tolerance");
        }
    }
    for (size_t r = 0; r < a.residual_denom.size(); ++r) {
        if (std::abs(a.residual_denom[r] - b.residual_denom[r]) > tol) {
            return fail("residual denominator out of tolerance");
        }
    }
    return true;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Random verification instance: softmax rows of Gaussian logits, draft tokens
// drawn from the q rows, uniforms from the same stream.
StepInputs make_instance(CounterRng& rng, size_t batch, size_t gamma, size_t vocab,
                         bool bonus_row, double logit_scale = 3.0) {
    StepInputs in;
    in.p = ProbTensor(batch, gamma + (bonus_row ? 1 : 0), vocab);
    in.q = ProbTensor(batch, gamma, vocab);
    in.draft_tokens = Matrix<int32_t>(batch, gamma);
    in.uniforms = Matrix<double>(batch, gamma + 1);

    std::vector<double> logits(vocab);
    for (size_t b = 0; b < batch; ++b) {
        for (size_t c = 0; c < in.p.steps(); ++c) {
            for (auto& v : logits) v = logit_scale * rng.next_normal();
            stable_softmax_into(logits, in.p.row(b, c));
        }
        for (size_t c = 0; c < gamma; ++c) {
            for (auto& v : logits) v = logit_scale * rng.next_normal();
            stable_softmax_into(logits, in.q.row(b, c));
            in.draft_tokens(b, c) =
                detail::sample_row(in.q.row(b, c), rng.next_uniform());
        }
        for (size_t c = 0; c <= gamma; ++c) {
            in.uniforms(b, c) = rng.next_uniform();
        }
    }
    return in;
}

SigmoidStepInputs make_sigmoid_instance(CounterRng& rng, size_t batch, size_t gamma, size_t vocab,
                                        bool bonus_row, double logit_scale, ScaleBounds bounds,
                                        bool emulate_half) {
    SigmoidStepInputs in;
    in.z_p = LogitTensor(batch, gamma + (bonus_row ? 1 : 0), vocab);
    in.z_q = LogitTensor(batch, gamma, vocab);
    in.bounds = bounds;
    in.emulate_half = emulate_half;
    in.draft_tokens = Matrix<int32_t>(batch, gamma);
    in.uniforms = Matrix<double>(batch, gamma + 1);

    for (auto& v : in.z_p.flat()) v = logit_scale * rng.next_normal();
    for (auto& v : in.z_q.flat()) v = logit_scale * rng.next_normal();

    std::vector<double> prob(vocab);
    for (size_t b = 0; b < batch; ++b) {
        for (size_t c = 0; c < gamma; ++c) {
            stable_softmax_into(in.z_q.row(b, c), prob);
            in.draft_tokens(b, c) = detail::sample_row(prob, rng.next_uniform());
        }
        for (size_t c = 0; c <= gamma; ++c) {
            in.uniforms(b, c) = rng.next_uniform();
        }
    }
    return in;
}

constexpr size_t kVocabChoices[] = {7, 257, 50257};
constexpr size_t kTileChoices[] = {4, 256, 1024};
constexpr unsigned kWorkerChoices[] = {1, 2, 8};

}  // namespace

SuiteResult run_distribution_suite(uint64_t seed, uint64_t trials) {
    if (trials < 1000) {
        throw std::invalid_argument("distribution suite needs a budget of >= 1000 trials");
    }
    SuiteResult suite{"distribution"};
    constexpr size_t kVocab = 8;

    // Frozen context: one target row, one (different) draft row.
    const auto pair = make_model_pair(seed, kVocab, /*divergence=*/2.0, /*logit_scale=*/1.5);
    const auto p_row = stable_softmax(pair.target.logits_row(0)).values;
    const auto q_row = stable_softmax(pair.draft.logits_row(0)).values;

    const TilePlan plan = plan_tiles(kVocab, 4);
    WorkerPool pool(2);
    CounterRng rng(seed ^ 0xd157);

    std::vector<uint64_t> counts_ref(kVocab, 0), counts_fused(kVocab, 0);
    for (uint64_t t = 0; t < trials; ++t) {
        const double u_draft = rng.next_uniform();
        const double u_accept = rng.next_uniform();
        const double u_final = rng.next_uniform();
        const auto draft = detail::sample_row(q_row, u_draft);

        StepInputs in;
        in.p = ProbTensor(1, 1, kVocab);
        in.q = ProbTensor(1, 1, kVocab);
        std::copy(p_row.begin(), p_row.end(), in.p.row(0, 0).begin());
        std::copy(q_row.begin(), q_row.end(), in.q.row(0, 0).begin());
        in.draft_tokens = Matrix<int32_t>(1, 1);
        in.draft_tokens(0, 0) = draft;
        in.uniforms = Matrix<double>(1, 2);
        in.uniforms(0, 0) = u_accept;
        in.uniforms(0, 1) = u_final;

        const auto ref = verify_sequential(in);
        const int32_t ref_token = ref.accepted_len[0] == 1 ? draft : ref.final_token[0];
        counts_ref[static_cast<size_t>(ref_token)]++;

        const auto fused = verify_fused(in, plan, pool);
        const int32_t fused_token = fused.result.accepted_len[0] == 1 ? draft : fused.result.final_token[0];
        counts_fused[static_cast<size_t>(fused_token)]++;
    }

    for (const auto* counts : {&counts_ref, &counts_fused}) {
        const bool is_ref = counts == &counts_ref;
        std::vector<double> empirical(kVocab);
        for (size_t i = 0; i < kVocab; ++i) {
            empirical[i] = static_cast<double>((*counts)[i]) / static_cast<double>(trials);
        }
        const double tv = total_variation(empirical, p_row);
        const double stat = chi_square_statistic(*counts, p_row);
        const double p_value = chi_square_p_value(stat, kVocab - 1);
        suite.check(tv < 0.01, std::string(is_ref ? "reference" : "fused") +
                                   ": TV distance to target = " + fmt(tv) + " (< 0.01)");
        suite.check(p_value > 0.001, std::string(is_ref ? "reference" : "fused") +
                                         ": chi-square p-value = " + fmt(p_value) + " (> 0.001)");
    }
    return suite;
}

SuiteResult run_acceptance_suite(uint64_t seed, uint64_t trials) {
    if (trials < 1000) {
        throw std::invalid_argument("acceptance suite needs a budget of >= 1000 trials");
    }
    SuiteResult suite{"acceptance"};
    constexpr size_t kVocab = 8;
    constexpr size_t kPairs = 10;
    CounterRng rng(seed ^ 0xacce);

    for (size_t pair_idx = 0; pair_idx < kPairs; ++pair_idx) {
        std::vector<double> logits(kVocab);
        for (auto& v : logits) v = 1.5 * rng.next_normal();
        const auto p_row = stable_softmax(logits).values;
        for (auto& v : logits) v = 1.5 * rng.next_normal();
        const auto q_row = stable_softmax(logits).values;

        double oracle = 0.0;  // sum_x min(p(x), q(x)), brute force
        for (size_t i = 0; i < kVocab; ++i) {
            oracle += std::min(p_row[i], q_row[i]);
        }

        uint64_t accepted = 0;
        StepInputs in;
        in.p = ProbTensor(1, 1, kVocab);
        in.q = ProbTensor(1, 1, kVocab);
        std::copy(p_row.begin(), p_row.end(), in.p.row(0, 0).begin());
        std::copy(q_row.begin(), q_row.end(), in.q.row(0, 0).begin());
        in.draft_tokens = Matrix<int32_t>(1, 1);
        in.uniforms = Matrix<double>(1, 2);
        for (uint64_t t = 0; t < trials; ++t) {
            in.draft_tokens(0, 0) = detail::sample_row(q_row, rng.next_uniform());
            in.uniforms(0, 0) = rng.next_uniform();
            in.uniforms(0, 1) = rng.next_uniform();
            accepted += static_cast<uint64_t>(verify_sequential(in).accepted_len[0]);
        }
        const double empirical = static_cast<double>(accepted) / static_cast<double>(trials);
        const double err = std::abs(empirical - oracle);
        suite.check(err < 0.01, "pair " + std::to_string(pair_idx) + ": |empirical " +
                                    fmt(empirical) + " - oracle " + fmt(oracle) + "| = " +
                                    fmt(err) + " (< 0.01)");
    }
    return suite;
}

SuiteResult run_oracle_exact_suite(uint64_t seed, size_t instances) {
    if (instances < 50) {
        throw std::invalid_argument("oracle suite needs a budget of >= 50 instances");
    }
    SuiteResult suite{"oracle-exact"};
    CounterRng rng(seed ^ 0x0eac);

    size_t mismatches = 0;
    std::string first_why;
    for (size_t i = 0; i < instances; ++i) {
        const size_t batch = (rng.next_u64() & 1) ? 4 : 1;
        const size_t gamma = 1 + rng.next_u64() % 20;
        const size_t vocab = kVocabChoices[rng.next_u64() % 3];
        const size_t tile_n = kTileChoices[rng.next_u64() % 3];
        const unsigned workers = kWorkerChoices[rng.next_u64() % 3];
        const bool bonus = (rng.next_u64() & 1) != 0;

        StepInputs inputs = make_instance(rng, batch, gamma, vocab, bonus);
        const auto reference = verify_sequential(inputs);
        const auto fused = verify_fused(inputs, plan_tiles(vocab, tile_n), workers);

        std::string why;
        if (!results_match(reference, fused.result, 1e-6, &why)) {
            if (mismatches == 0) first_why = why;
            ++mismatches;
        }
        const uint64_t expect = static_cast<uint64_t>(batch) * gamma * vocab;
        if (fused.trace.hbm_elem_reads_p != expect || fused.trace.hbm_elem_reads_q != expect) {
            if (mismatches == 0) first_why = "load-once counters off";
            ++mismatches;
        }
    }
    suite.check(mismatches == 0,
                std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                    " mismatches" + (mismatches ? " (" + first_why + ")" : ""));
    return suite;
}

SuiteResult run_oracle_sigmoid_suite(uint64_t seed, size_t instances) {
    if (instances < 50) {
        throw std::invalid_argument("oracle suite needs a budget of >= 50 instances");
    }
    SuiteResult suite{"oracle-sigmoid"};
    CounterRng rng(seed ^ 0x516);

    size_t mismatches = 0, argmax_violations = 0;
    std::string first_why;
    for (size_t i = 0; i < instances; ++i) {
        const size_t batch = (rng.next_u64() & 1) ? 4 : 1;
        const size_t gamma = 1 + rng.next_u64() % 20;
        const size_t vocab = kVocabChoices[rng.next_u64() % 3];
        const size_t tile_n = kTileChoices[rng.next_u64() % 3];
        const unsigned workers = kWorkerChoices[rng.next_u64() % 3];
        const bool bonus = (rng.next_u64() & 1) != 0;
        const double scale = (rng.next_u64() & 1) ? 3.0 : 800.0;
        const double magnitude = (rng.next_u64() & 1) ? 1e3 : 1e4;
        const bool half = (rng.next_u64() % 4) == 0;

        const auto inputs = make_sigmoid_instance(rng, batch, gamma, vocab, bonus, scale,
                                                  ScaleBounds{-magnitude, magnitude}, half);
        const auto oracle = verify_sigmoid_sequential(inputs);
        const auto fused = verify_sigmoid_fused(inputs, plan_tiles(vocab, tile_n), workers);

        std::string why;
        if (!results_match(oracle, fused.result, 1e-6, &why)) {
            if (mismatches == 0) first_why = why;
            ++mismatches;
        }
        const uint64_t expect = static_cast<uint64_t>(batch) * gamma * vocab;
        if (fused.trace.hbm_elem_reads_p != expect || fused.trace.hbm_elem_reads_q != expect) {
            if (mismatches == 0) first_why = "load-once counters off";
            ++mismatches;
        }

        // Ranking invariance: argmax of the sigmoid approximation matches the
        // softmax argmax on every row (both transforms are strictly monotone).
        if (!half) {
            const auto p_hat = materialize_sigmoid(inputs.z_p, inputs.bounds, false);
            for (size_t b = 0; b < batch && argmax_violations == 0; ++b) {
                for (size_t c = 0; c < inputs.z_p.steps(); ++c) {
                    const auto z_row = inputs.z_p.row(b, c);
                    const auto s_row = p_hat.row(b, c);
                    const auto soft = stable_softmax(z_row).values;
                    const auto za = std::max_element(soft.begin(), soft.end()) - soft.begin();
                    const auto sa = std::max_element(s_row.begin(), s_row.end()) - s_row.begin();
                    if (za != sa) {
                        ++argmax_violations;
                        break;
                    }
                }
            }
        }
    }
    suite.check(mismatches == 0,
                std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                    " oracle mismatches" + (mismatches ? " (" + first_why + ")" : ""));
    suite.check(argmax_violations == 0,
                "argmax(sigmoid) == argmax(softmax) on all rows (" +
                    std::to_string(argmax_violations) + " violations)");
    return suite;
}

SuiteResult run_memory_suite(uint64_t seed) {
    SuiteResult suite{"memory"};
    CounterRng rng(seed ^ 0x3e3);

    struct Config {
        size_t batch, gamma, vocab, tile_n;
    };
    const Config configs[] = {
        {1, 3, 1000, 256}, {1, 1, 7, 4}, {4, 5, 257, 256}, {2, 8, 50257, 1024}, {1, 2, 1024, 1024},
    };

    for (const auto& cfg : configs) {
        const uint64_t expect_reads = static_cast<uint64_t>(cfg.batch) * cfg.gamma * cfg.vocab;
        const TilePlan plan = plan_tiles(cfg.vocab, cfg.tile_n);
        const uint64_t expect_kernels =
            static_cast<uint64_t>(cfg.batch) * cfg.gamma * plan.tile_count();
        const uint64_t tile_budget =
            (2 * plan.tile_width + std::bit_ceil(plan.tile_width)) * sizeof(double);
        const std::string label = "B=" + std::to_string(cfg.batch) + " gamma=" +
                                  std::to_string(cfg.gamma) + " V=" + std::to_string(cfg.vocab) +
                                  " n=" + std::to_string(cfg.tile_n);

        StepInputs inputs = make_instance(rng, cfg.batch, cfg.gamma, cfg.vocab, true);
        const auto fused = verify_fused(inputs, plan, 2);
        suite.check(fused.trace.hbm_elem_reads_p == expect_reads &&
                        fused.trace.hbm_elem_reads_q == expect_reads,
                    "fused " + label + ": reads_p = reads_q = " +
                        std::to_string(fused.trace.hbm_elem_reads_p) + " == B*gamma*V = " +
                        std::to_string(expect_reads));
        suite.check(fused.trace.kernel_invocations == expect_kernels,
                    "fused " + label + ": kernel invocations = " +
                        std::to_string(fused.trace.kernel_invocations) + " == B*gamma*K = " +
                        std::to_string(expect_kernels));
        suite.check(fused.trace.peak_tile_bytes <= tile_budget,
                    "fused " + label + ": peak tile bytes " +
                        std::to_string(fused.trace.peak_tile_bytes) + " <= budget " +
                        std::to_string(tile_budget));

        const auto sig_in = make_sigmoid_instance(rng, cfg.batch, cfg.gamma, cfg.vocab, true, 3.0,
                                                  ScaleBounds{-1e3, 1e3}, false);
        const auto sig = verify_sigmoid_fused(sig_in, plan, 2);
        suite.check(sig.trace.hbm_elem_reads_p == expect_reads &&
                        sig.trace.hbm_elem_reads_q == expect_reads,
                    "sigmoid " + label + ": reads_p = reads_q = " +
                        std::to_string(sig.trace.hbm_elem_reads_p) + " == B*gamma*V = " +
                        std::to_string(expect_reads));
        suite.check(sig.trace.peak_tile_bytes <= tile_budget,
                    "sigmoid " + label + ": peak tile bytes within budget");
    }
    return suite;
}

SuiteResult run_gamma_suite(uint64_t seed) {
    SuiteResult suite{"gamma"};

    auto next = [](int gamma, bool all) {
        return gamma_update(GammaState{gamma, 1, 64}, all).gamma;
    };
    suite.check(next(5, true) == 7, "(gamma=5, all accepted) -> 7");
    suite.check(next(5, false) == 4, "(gamma=5, rejection) -> 4");
    suite.check(next(1, false) == 1, "(gamma=1, rejection) -> 1 (floor)");
    suite.check(next(63, true) == 64, "(gamma=63, all accepted) -> 64 (cap)");
    suite.check(next(64, true) == 64, "(gamma=64, all accepted) -> 64 (cap)");

    // Replay recorded trajectories step by step.
    size_t violations = 0;
    for (uint64_t s = 0; s < 8; ++s) {
        const auto pair = make_model_pair(seed + s, 64, 1.0);
        DecodeConfig dc;
        dc.max_len = 160;
        dc.backend = Backend::reference;
        dc.seed = seed + s;
        const auto out = decode(pair.target, pair.draft, std::vector<int32_t>{0}, dc);
        GammaState state{out.stats.gamma_history.front(), 1, 64};
        for (size_t t = 0; t + 1 < out.stats.gamma_history.size(); ++t) {
            state = gamma_update(state, out.stats.all_accepted_history[t] != 0);
            if (state.gamma != out.stats.gamma_history[t + 1]) ++violations;
        }
    }
    suite.check(violations == 0,
                "replayed trajectories follow the +2 / -1 rule exactly (" +
                    std::to_string(violations) + " violations)");
    return suite;
}

SuiteResult run_determinism_suite(uint64_t seed, size_t num_seeds) {
    SuiteResult suite{"determinism"};
    CounterRng rng(seed ^ 0xde7);

    size_t fused_mismatch = 0, sigmoid_mismatch = 0;
    for (size_t s = 0; s < num_seeds; ++s) {
        const size_t batch = (rng.next_u64() & 1) ? 4 : 1;
        const size_t gamma = 1 + rng.next_u64() % 12;
        const size_t vocab = (rng.next_u64() & 1) ? 257 : 1031;

        const StepInputs base = make_instance(rng, batch, gamma, vocab, true);
        const TilePlan plan = plan_tiles(vocab, 256);
        StepInputs in1 = base, in2 = base, in8 = base;
        const auto r1 = verify_fused(in1, plan, 1);
        const auto r2 = verify_fused(in2, plan, 2);
        const auto r8 = verify_fused(in8, plan, 8);
        if (!(r1.result == r2.result) || !(r1.result == r8.result) ||
            !(r1.trace == r2.trace) || !(r1.trace == r8.trace)) {
            ++fused_mismatch;
        }

        const auto sig = make_sigmoid_instance(rng, batch, gamma, vocab, true, 800.0,
                                               ScaleBounds{-1e3, 1e3}, false);
        const auto s1 = verify_sigmoid_fused(sig, plan, 1);
        const auto s2 = verify_sigmoid_fused(sig, plan, 2);
        const auto s8 = verify_sigmoid_fused(sig, plan, 8);
        if (!(s1.result == s2.result) || !(s1.result == s8.result) ||
            !(s1.trace == s2.trace) || !(s1.trace == s8.trace)) {
            ++sigmoid_mismatch;
        }
    }
    suite.check(fused_mismatch == 0,
                "fused bit-identical across workers {1,2,8} on " + std::to_string(num_seeds) +
                    " seeds (" + std::to_string(fused_mismatch) + " mismatches)");
    suite.check(sigmoid_mismatch == 0,
                "sigmoid bit-identical across workers {1,2,8} on " + std::to_string(num_seeds) +
                    " seeds (" + std::to_string(sigmoid_mismatch) + " mismatches)");
    return suite;
}

SuiteResult run_scale_limit_suite(uint64_t seed, uint64_t trials) {
    if (trials < 1000) {
        throw std::invalid_argument("scale-limit suite needs a budget of >= 1000 trials");
    }
    SuiteResult suite{"scale-limit"};
    constexpr size_t kVocab = 64;
    const ScaleBounds wide{-1e9, 1e9};
    CounterRng rng(seed ^ 0x5ca1e);

    const TilePlan plan = plan_tiles(kVocab, 64);
    WorkerPool pool(1);
    uint64_t accepted = 0;
    std::vector<double> prob(kVocab);
    for (uint64_t t = 0; t < trials; ++t) {
        SigmoidStepInputs in;
        in.z_p = LogitTensor(1, 1, kVocab);
        in.z_q = LogitTensor(1, 1, kVocab);
        in.bounds = wide;
        // Logits bounded by 1e3.
        for (auto& v : in.z_p.flat()) v = 2000.0 * rng.next_uniform() - 1000.0;
        for (auto& v : in.z_q.flat()) v = 2000.0 * rng.next_uniform() - 1000.0;
        in.draft_tokens = Matrix<int32_t>(1, 1);
        stable_softmax_into(in.z_q.row(0, 0), prob);
        in.draft_tokens(0, 0) = detail::sample_row(prob, rng.next_uniform());
        in.uniforms = Matrix<double>(1, 2);
        in.uniforms(0, 0) = rng.next_uniform();
        in.uniforms(0, 1) = rng.next_uniform();
        accepted += static_cast<uint64_t>(verify_sigmoid_fused(in, plan, pool).result.accepted_len[0]);
    }
    const double rate = static_cast<double>(accepted) / static_cast<double>(trials);
    suite.check(rate >= 0.999, "bounds +/-1e9, logits in [-1e3, 1e3]: acceptance rate = " +
                                   fmt(rate) + " (>= 0.999)");
    return suite;
}

std::vector<SuiteResult> run_suite(const std::string& name, uint64_t seed, uint64_t budget) {
    if (name == "distribution") return {run_distribution_suite(seed, budget)};
    if (name == "acceptance") return {run_acceptance_suite(seed, budget)};
    if (name == "oracle") {
        return {run_oracle_exact_suite(seed, budget), run_oracle_sigmoid_suite(seed, budget)};
    }
    if (name == "memory") return {run_memory_suite(seed)};
    if (name == "gamma") return {run_gamma_suite(seed)};
    throw std::invalid_argument("unknown validation suite: " + name);
}

}  // namespace specsamp
