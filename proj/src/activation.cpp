#include "specsamp/activation.hpp"

#include <stdexcept>

#include "specsamp/dist.hpp"

namespace specsamp {

namespace {

void ensure_shape(const LogitTensor& z, ProbTensor& out) {
    if (out.batch() != z.batch() || out.steps() != z.steps() || out.vocab() != z.vocab()) {
        out = ProbTensor(z.batch(), z.steps(), z.vocab());
    }
    out.normalized = true;
}

}  // namespace

void materialize_softmax_into(const LogitTensor& z, ProbTensor& out) {
    ensure_shape(z, out);
    for (size_t b = 0; b < z.batch(); ++b) {
        for (size_t c = 0; c < z.steps(); ++c) {
            stable_softmax_into(z.row(b, c), out.row(b, c));
        }
    }
}

void materialize_softmax_into(const LogitTensor& z, ProbTensor& out, WorkerPool& pool) {
    ensure_shape(z, out);
    const size_t rows = z.batch() * z.steps();
    pool.parallel_for(rows, [&](size_t r, unsigned) {
        const size_t b = r / z.steps();
        const size_t c = r % z.steps();
        stable_softmax_into(z.row(b, c), out.row(b, c));
    });
}

ProbTensor materialize_softmax(const LogitTensor& z) {
    ProbTensor out(z.batch(), z.steps(), z.vocab());
    materialize_softmax_into(z, out);
    return out;
}

ProbTensor materialize_softmax(const LogitTensor& z, WorkerPool& pool) {
    ProbTensor out(z.batch(), z.steps(), z.vocab());
    materialize_softmax_into(z, out, pool);
    return out;
}

}  // namespace specsamp
