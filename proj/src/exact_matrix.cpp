#include "blform/exact_matrix.hpp"

#include <stdexcept>
#include <utility>

namespace blform {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw std::invalid_argument("ExactMatrix: entry count does not match dimensions");
}

ExactMatrix ExactMatrix::identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::transposed() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RrefResult rref(const ExactMatrix& m) {
    RrefResult result{m, 0, {}};
    ExactMatrix& a = result.rref;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
        std::size_t r = pivot_row;
        while (r < a.rows() && a.at(r, col) == 0) ++r;
        if (r == a.rows()) continue;
        if (r != pivot_row)
            for (std::size_t c = 0; c < a.cols(); ++c)
                std::swap(a.at(r, c), a.at(pivot_row, c));
        const Rational inv_pivot = Rational(1) / a.at(pivot_row, col);
        for (std::size_t c = col; c < a.cols(); ++c) a.at(pivot_row, c) *= inv_pivot;
        for (std::size_t rr = 0; rr < a.rows(); ++rr) {
            if (rr == pivot_row || a.at(rr, col) == 0) continue;
            const Rational factor = a.at(rr, col);
            for (std::size_t c = col; c < a.cols(); ++c)
                a.at(rr, c) -= factor * a.at(pivot_row, c);
        }
        result.pivot_cols.push_back(col);
        ++pivot_row;
    }
    result.rank = pivot_row;
    return result;
}

std::size_t rank_of(const ExactMatrix& m) { return rref(m).rank; }

Rational determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant: matrix is not square");
    const std::size_t n = m.rows();
    ExactMatrix a = m;
    bool negate = false;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t r = col;
        while (r < n && a.at(r, col) == 0) ++r;
        if (r == n) return 0;
        if (r != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a.at(r, c), a.at(col, c));
            negate = !negate;
        }
        const Rational& pivot = a.at(col, col);
        for (std::size_t rr = col + 1; rr < n; ++rr) {
            if (a.at(rr, col) == 0) continue;
            const Rational factor = a.at(rr, col) / pivot;
            for (std::size_t c = col; c < n; ++c)
                a.at(rr, c) -= factor * a.at(col, c);
        }
    }
    Rational det = negate ? Rational(-1) : Rational(1);
    for (std::size_t i = 0; i < n; ++i) det *= a.at(i, i);
    return det;
}

}  // namespace blform
