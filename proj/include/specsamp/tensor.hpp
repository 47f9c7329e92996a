#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace specsamp {

// Dense row-major [batch][step][vocab] grid of doubles. Rows are the unit of
// access everywhere: a row is one categorical score vector over the vocabulary.
class Grid3 {
public:
    Grid3() = default;
    Grid3(size_t batch, size_t steps, size_t vocab)
        : batch_(batch), steps_(steps), vocab_(vocab), data_(batch * steps * vocab, 0.0) {
        if (batch == 0 || steps == 0 || vocab == 0) {
            throw std::invalid_argument("Grid3: all dimensions must be >= 1");
        }
    }

    size_t batch() const { return batch_; }
    size_t steps() const { return steps_; }
    size_t vocab() const { return vocab_; }
    size_t size() const { return data_.size(); }

    std::span<double> row(size_t b, size_t c) {
        return {data_.data() + (b * steps_ + c) * vocab_, vocab_};
    }
    std::span<const double> row(size_t b, size_t c) const {
        return {data_.data() + (b * steps_ + c) * vocab_, vocab_};
    }

    std::span<double> flat() { return data_; }
    std::span<const double> flat() const { return data_; }

    bool operator==(const Grid3&) const = default;

private:
    size_t batch_ = 0, steps_ = 0, vocab_ = 0;
    std::vector<double> data_;
};

// Raw model scores, B x steps x |V|.
using LogitTensor = Grid3;

// Probability grid. `normalized` is false for grids produced by the sigmoid
// approximation, whose rows do not sum to 1.
struct ProbTensor {
    Grid3 values;
    bool normalized = true;

    ProbTensor() = default;
    ProbTensor(size_t batch, size_t steps, size_t vocab, bool normalized_ = true)
        : values(batch, steps, vocab), normalized(normalized_) {}

    size_t batch() const { return values.batch(); }
    size_t steps() const { return values.steps(); }
    size_t vocab() const { return values.vocab(); }
    std::span<double> row(size_t b, size_t c) { return values.row(b, c); }
    std::span<const double> row(size_t b, size_t c) const { return values.row(b, c); }

    bool operator==(const ProbTensor&) const = default;
};

// Minimal dense row-major matrix, used for draft tokens and uniform draws.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(size_t r) const { return {data_.data() + r * cols_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

}  // namespace specsamp
