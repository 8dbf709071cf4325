#pragma once

#include <mutex>
#include <unordered_map>
#include <vector>

#include "blform/exact_matrix.hpp"
#include "blform/rational.hpp"
#include "blform/subset_mask.hpp"

namespace blform {

struct Flat {
    SubsetMask set;
    std::size_t rank = 0;
};

// The matroid of a finite family of vectors in Q^k. Queries are logically
// pure; the rank memo and the flat list are built lazily under a mutex so
// concurrent readers are safe.
class VectorMatroid {
public:
    // vectors[i] has length k; loops (zero vectors) are allowed.
    VectorMatroid(std::size_t dimension, std::vector<std::vector<Rational>> vectors);

    std::size_t dimension() const { return k_; }
    std::size_t size() const { return m_; }
    std::size_t full_rank() const { return full_rank_; }
    const std::vector<std::vector<Rational>>& vectors() const { return vectors_; }

    // Dimension of the span of the selected vectors; rank({}) = 0.
    std::size_t rank_of(SubsetMask s) const;

    // All ground vectors inside span(S). Extensive, monotone, idempotent.
    SubsetMask closure_of(SubsetMask s) const;

    bool is_independent(SubsetMask s) const { return rank_of(s) == s.count(); }

    // All full-rank k-subsets, ordered lexicographically by index tuple.
    // Throws DomainError when the ground set does not span Q^k.
    std::vector<SubsetMask> enumerate_bases() const;

    // All flats (S with closure(S) = S), each once, ordered by (rank, bits).
    // Includes closure({}) and the full ground set. The list is computed on
    // first use and immutable afterwards.
    const std::vector<Flat>& enumerate_flats() const;

    // Rows = selected vectors in ground-set order.
    ExactMatrix submatrix(SubsetMask s) const;

    void check_subset(SubsetMask s) const;

private:
    std::size_t rank_uncached(SubsetMask s) const;

    std::size_t k_;
    std::size_t m_;
    std::vector<std::vector<Rational>> vectors_;
    std::size_t full_rank_ = 0;

    mutable std::mutex cache_mutex_;
    mutable std::unordered_map<std::uint64_t, std::size_t> rank_cache_;
    mutable std::vector<Flat> flats_cache_;
    mutable bool flats_ready_ = false;
};

}  // namespace blform
