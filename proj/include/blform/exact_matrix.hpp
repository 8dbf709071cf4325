#pragma once

#include <cstddef>
#include <vector>

#include "blform/rational.hpp"

namespace blform {

// Dense matrix of exact rationals, row major.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}
    ExactMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static ExactMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Rational>& entries() const { return entries_; }

    ExactMatrix transposed() const;

    bool operator==(const ExactMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

struct RrefResult {
    ExactMatrix rref;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form by rational Gaussian elimination. The pivot in
// each column is the first row with a nonzero entry, so the output (which is
// unique anyway) is produced by a deterministic sequence of row operations.
RrefResult rref(const ExactMatrix& m);

std::size_t rank_of(const ExactMatrix& m);

// Exact determinant; throws std::invalid_argument on non-square input.
Rational determinant(const ExactMatrix& m);

}  // namespace blform
