#include "doctest.h"

#include "blform/exact_matrix.hpp"
#include "blform/rational.hpp"
#include "blform/rng.hpp"

#include "oracles.hpp"

using namespace blform;

namespace {

ExactMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    ExactMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
    return m;
}

ExactMatrix random_int_matrix(RngStream& rng, std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            m.at(r, c) = Rational(static_cast<long>(rng.next_in_range(0, 10)) - 5);
    return m;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
    CHECK(to_string(parse_rational("3/6")) == "1/2");
    CHECK(to_string(parse_rational("-4/8")) == "-1/2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK(to_string(Rational(0)) == "0");
    CHECK(parse_rational("1/2") + parse_rational("1/2") == 1);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    // Canonical form: positive denominator, reduced.
    Rational r(6, -4);
    CHECK(numerator(r) == -3);
    CHECK(denominator(r) == 2);
}

TEST_CASE("rational_pow handles negative exponents") {
    CHECK(rational_pow(Rational(2), 3) == 8);
    CHECK(rational_pow(Rational(2), -1) == Rational(1, 2));
    CHECK(rational_pow(Rational(-2, 3), -2) == Rational(9, 4));
    CHECK(rational_pow(Rational(5), 0) == 1);
    CHECK_THROWS_AS(rational_pow(Rational(0), -1), DomainError);
}

TEST_CASE("rref on the identity") {
    const auto m = ExactMatrix::identity(2);
    const auto r = rref(m);
    CHECK(r.rref == m);
    CHECK(r.rank == 2);
    CHECK(r.pivot_cols == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rref rank of a dependent row set") {
    const auto m = from_rows({{1, 0}, {0, 1}, {1, 1}});
    CHECK(rref(m).rank == 2);
}

TEST_CASE("rref rank of a triangular system") {
    const auto m = from_rows({{1, 0, 0}, {1, -1, 0}, {1, -1, 1}});
    const auto r = rref(m);
    CHECK(r.rank == 3);
    CHECK(r.rref == ExactMatrix::identity(3));
}

TEST_CASE("determinant basics") {
    CHECK(determinant(ExactMatrix::identity(4)) == 1);
    CHECK(determinant(from_rows({{1, 0, 0}, {1, -1, 0}, {1, -1, 1}})) == -1);
    CHECK(determinant(from_rows({{2, 0}, {0, 1}})) == 2);
    CHECK_THROWS_AS(determinant(ExactMatrix(2, 3)), std::invalid_argument);
}

TEST_CASE("determinant matches the cofactor oracle on random matrices") {
    RngStream rng(2024, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 5;
        const auto m = random_int_matrix(rng, n);
        CHECK(determinant(m) == oracle::cofactor_determinant(m));
    }
}

TEST_CASE("determinant is alternating under row swaps") {
    RngStream rng(7, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + trial % 4;
        auto m = random_int_matrix(rng, n);
        const Rational d = determinant(m);
        const std::size_t r1 = rng.next_in_range(0, n - 1);
        std::size_t r2 = rng.next_in_range(0, n - 2);
        if (r2 >= r1) ++r2;
        for (std::size_t c = 0; c < n; ++c) std::swap(m.at(r1, c), m.at(r2, c));
        CHECK(determinant(m) == -d);
    }
}

TEST_CASE("determinant is linear in the first row") {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 3;
        auto a = random_int_matrix(rng, n);
        auto b = a;
        auto sum = a;
        for (std::size_t c = 0; c < n; ++c) {
            b.at(0, c) = Rational(static_cast<long>(rng.next_in_range(0, 10)) - 5);
            sum.at(0, c) = a.at(0, c) + b.at(0, c);
        }
        CHECK(determinant(sum) == determinant(a) + determinant(b));
    }
}

TEST_CASE("rank equals rank of the transpose") {
    RngStream rng(13, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng.next_in_range(0, 4);
        const std::size_t cols = 1 + rng.next_in_range(0, 4);
        ExactMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m.at(r, c) = Rational(static_cast<long>(rng.next_in_range(0, 6)) - 3);
        CHECK(rank_of(m) == rank_of(m.transposed()));
    }
}
