#pragma once

#include "specsamp/tensor.hpp"
#include "specsamp/worker_pool.hpp"

namespace specsamp {

// Softmax materialization of a full logit tensor, row by row. The sequential
// form is the baseline pipeline's activation; the pooled form splits rows
// across workers and produces bit-identical values (each row is still
// computed by the single-row routine).
void materialize_softmax_into(const LogitTensor& z, ProbTensor& out);
void materialize_softmax_into(const LogitTensor& z, ProbTensor& out, WorkerPool& pool);

ProbTensor materialize_softmax(const LogitTensor& z);
ProbTensor materialize_softmax(const LogitTensor& z, WorkerPool& pool);

}  // namespace specsamp
