#include "doctest.h"

#include <algorithm>

#include "blform/cauchy_family.hpp"
#include "blform/errors.hpp"
#include "blform/vector_matroid.hpp"

#include "oracles.hpp"

using namespace blform;

namespace {

VectorMatroid from_rows(std::size_t k, const std::vector<std::vector<long>>& rows) {
    std::vector<std::vector<Rational>> vectors;
    for (const auto& row : rows) {
        std::vector<Rational> v(row.begin(), row.end());
        vectors.push_back(std::move(v));
    }
    return VectorMatroid(k, std::move(vectors));
}

// e1, e2, e1+e2 in the plane.
VectorMatroid triangle() { return from_rows(2, {{1, 0}, {0, 1}, {1, 1}}); }

SubsetMask mask(std::initializer_list<std::size_t> indices) {
    SubsetMask s;
    for (std::size_t i : indices) s = s.with(i);
    return s;
}

}  // namespace

TEST_CASE("rank_of basics on the n=1 family") {
    const auto inst = build_family(1);
    const auto& m = inst.matroid;
    CHECK(m.rank_of(SubsetMask{}) == 0);
    // {e1, e1-e2, e2} is a dependent triple.
    CHECK(m.rank_of(mask({0, 1, 2})) == 2);
    CHECK(m.rank_of(SubsetMask::full(6)) == 3);
    CHECK(m.full_rank() == 3);
}

TEST_CASE("closure_of on the n=1 family") {
    const auto inst = build_family(1);
    const auto& m = inst.matroid;
    CHECK(m.closure_of(SubsetMask{}) == SubsetMask{});
    CHECK(m.closure_of(mask({0})) == mask({0}));
    // span{e1, e2} picks up e1-e2 and nothing else.
    CHECK(m.closure_of(mask({0, 2})) == mask({0, 1, 2}));
}

TEST_CASE("is_independent") {
    const auto inst = build_family(1);
    const auto& m = inst.matroid;
    CHECK(m.is_independent(SubsetMask{}));
    CHECK_FALSE(m.is_independent(mask({0, 1, 2})));
    CHECK(m.is_independent(mask({0, 2, 4})));  // e1, e2, e3
}

TEST_CASE("enumerate_bases on tiny matroids") {
    const auto unique = from_rows(2, {{1, 0}, {0, 1}});
    const auto bases = unique.enumerate_bases();
    REQUIRE(bases.size() == 1);
    CHECK(bases[0] == mask({0, 1}));

    const auto tri = triangle();
    CHECK(tri.enumerate_bases().size() == 3);

    const auto deficient = from_rows(3, {{1, 0, 0}, {0, 1, 0}});
    CHECK_THROWS_AS(deficient.enumerate_bases(), DomainError);
}

TEST_CASE("family basis count matches the brute-force oracle") {
    const auto inst = build_family(1);
    const auto bases = inst.matroid.enumerate_bases();
    const auto expected = oracle::brute_force_bases(inst.matroid);
    auto sorted = bases;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == expected);
    CHECK(bases.size() == 17);
}

TEST_CASE("bases are emitted in lexicographic index order") {
    const auto tri = triangle();
    const auto bases = tri.enumerate_bases();
    REQUIRE(bases.size() == 3);
    CHECK(bases[0] == mask({0, 1}));
    CHECK(bases[1] == mask({0, 2}));
    CHECK(bases[2] == mask({1, 2}));
}

TEST_CASE("enumerate_flats on tiny matroids") {
    const auto unique = from_rows(2, {{1, 0}, {0, 1}});
    CHECK(unique.enumerate_flats().size() == 4);  // Boolean lattice

    const auto tri = triangle();
    const auto& flats = tri.enumerate_flats();
    REQUIRE(flats.size() == 5);
    CHECK(flats[0].set == SubsetMask{});
    CHECK(flats[4].set == SubsetMask::full(3));
}

TEST_CASE("flats match the 2^m brute-force closure sweep") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
        const auto m = oracle::random_matroid(seed, 10, 4);
        const auto expected = oracle::brute_force_flats(m);
        const auto& flats = m.enumerate_flats();
        REQUIRE(flats.size() == expected.size());
        auto sorted = flats;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Flat& a, const Flat& b) { return a.set < b.set; });
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            CHECK(sorted[i].set == expected[i]);
            CHECK(sorted[i].rank == m.rank_of(expected[i]));
        }
    }
    const auto inst = build_family(1);
    CHECK(inst.matroid.enumerate_flats().size() == oracle::brute_force_flats(inst.matroid).size());
}

TEST_CASE("rank is monotone and submodular") {
    RngStream rng(99, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto m = oracle::random_matroid(1000 + trial, 12, 4);
        const std::uint64_t limit = SubsetMask::full(m.size()).bits;
        for (int probe = 0; probe < 40; ++probe) {
            const SubsetMask a(rng.next_in_range(0, limit));
            const SubsetMask b(rng.next_in_range(0, limit));
            const auto ra = m.rank_of(a);
            const auto rb = m.rank_of(b);
            CHECK(m.rank_of(a | b) + m.rank_of(a & b) <= ra + rb);
            if (a.contains(b)) CHECK(rb <= ra);
        }
    }
}

TEST_CASE("closure is extensive, monotone and idempotent") {
    RngStream rng(17, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto m = oracle::random_matroid(2000 + trial, 12, 4);
        const std::uint64_t limit = SubsetMask::full(m.size()).bits;
        for (int probe = 0; probe < 30; ++probe) {
            const SubsetMask a(rng.next_in_range(0, limit));
            const SubsetMask b(rng.next_in_range(0, limit) & a.bits);  // b subset of a
            const auto ca = m.closure_of(a);
            CHECK(ca.contains(a));
            CHECK(ca.contains(m.closure_of(b)));
            CHECK(m.closure_of(ca) == ca);
        }
    }
}

TEST_CASE("every k-subset is a basis or dependent, never both") {
    const auto inst = build_family(1);
    const auto& m = inst.matroid;
    const auto bases = m.enumerate_bases();
    std::size_t basis_hits = 0;
    const std::uint64_t limit = SubsetMask::full(m.size()).bits;
    for (std::uint64_t bits = 0; bits <= limit; ++bits) {
        SubsetMask s(bits);
        if (s.count() != m.dimension()) continue;
        const bool listed = std::find(bases.begin(), bases.end(), s) != bases.end();
        const bool independent = m.is_independent(s);
        CHECK(listed == independent);
        if (listed) {
            ++basis_hits;
            CHECK(m.rank_of(s) == m.dimension());
        }
    }
    CHECK(basis_hits == bases.size());
}

TEST_CASE("loops are permitted but excluded from bases") {
    const auto m = from_rows(2, {{1, 0}, {0, 0}, {0, 1}});
    CHECK(m.rank_of(mask({1})) == 0);
    const auto bases = m.enumerate_bases();
    REQUIRE(bases.size() == 1);
    CHECK(bases[0] == mask({0, 2}));
    // The loop sits in every flat, including the closure of the empty set.
    CHECK(m.closure_of(SubsetMask{}) == mask({1}));
}

TEST_CASE("construction rejects malformed input") {
    CHECK_THROWS_AS(VectorMatroid(2, {}), std::invalid_argument);
    CHECK_THROWS_AS(from_rows(2, {{1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("rank cache is consistent under concurrent queries") {
    const auto inst = build_family(2);
    const auto& m = inst.matroid;
    std::vector<std::size_t> got(200);
    parallel_for(got.size(), 8, [&](std::size_t i) {
        got[i] = m.rank_of(SubsetMask(i * 37 % (SubsetMask::full(m.size()).bits + 1)));
    });
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == m.rank_of(SubsetMask(i * 37 % (SubsetMask::full(m.size()).bits + 1))));
}
