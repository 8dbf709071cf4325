#include "blform/vector_matroid.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "blform/errors.hpp"

namespace blform {

namespace {

// Echelon basis of a list of vectors, for cheap span-membership tests.
class SpanBasis {
public:
    explicit SpanBasis(std::size_t dim) : dim_(dim) {}

    // Returns true (and absorbs v) if v was outside the current span.
    bool add(std::vector<Rational> v) {
        if (!reduce(v)) return false;
        std::size_t lead = 0;
        while (v[lead] == 0) ++lead;
        const Rational inv = Rational(1) / v[lead];
        for (std::size_t i = lead; i < dim_; ++i) v[i] *= inv;
        rows_.push_back({lead, std::move(v)});
        std::sort(rows_.begin(), rows_.end(),
                  [](const Row& a, const Row& b) { return a.lead < b.lead; });
        return true;
    }

    bool contains(std::vector<Rational> v) const { return !reduce(v); }

    std::size_t rank() const { return rows_.size(); }

private:
    struct Row {
        std::size_t lead;
        std::vector<Rational> values;
    };

    // Reduces v against the echelon rows; true iff a nonzero remainder is left.
    bool reduce(std::vector<Rational>& v) const {
        for (const Row& row : rows_) {
            if (v[row.lead] == 0) continue;
            const Rational factor = v[row.lead];
            for (std::size_t i = row.lead; i < dim_; ++i) v[i] -= factor * row.values[i];
        }
        for (const Rational& x : v)
            if (x != 0) return true;
        return false;
    }

    std::size_t dim_;
    std::vector<Row> rows_;
};

}  // namespace

VectorMatroid::VectorMatroid(std::size_t dimension, std::vector<std::vector<Rational>> vectors)
    : k_(dimension), m_(vectors.size()), vectors_(std::move(vectors)) {
    if (m_ == 0) throw std::invalid_argument("VectorMatroid: ground set is empty");
    if (m_ > 64) throw std::invalid_argument("VectorMatroid: ground sets above 64 elements are unsupported");
    for (const auto& v : vectors_)
        if (v.size() != k_)
            throw std::invalid_argument("VectorMatroid: vector length does not match dimension");
    full_rank_ = rank_uncached(SubsetMask::full(m_));
}

void VectorMatroid::check_subset(SubsetMask s) const {
    if (!SubsetMask::full(m_).contains(s))
        throw std::invalid_argument("subset mask has bits outside the ground set");
}

std::size_t VectorMatroid::rank_uncached(SubsetMask s) const {
    SpanBasis basis(k_);
    for (std::size_t i : s.indices()) basis.add(vectors_[i]);
    return basis.rank();
}

std::size_t VectorMatroid::rank_of(SubsetMask s) const {
    check_subset(s);
    {
        std::lock_guard lock(cache_mutex_);
        auto it = rank_cache_.find(s.bits);
        if (it != rank_cache_.end()) return it->second;
    }
    const std::size_t r = rank_uncached(s);
    std::lock_guard lock(cache_mutex_);
    rank_cache_.emplace(s.bits, r);
    return r;
}

SubsetMask VectorMatroid::closure_of(SubsetMask s) const {
    check_subset(s);
    SpanBasis basis(k_);
    for (std::size_t i : s.indices()) basis.add(vectors_[i]);
    SubsetMask closure = s;
    for (std::size_t i = 0; i < m_; ++i) {
        if (closure.test(i)) continue;
        if (basis.contains(vectors_[i])) closure = closure.with(i);
    }
    return closure;
}

std::vector<SubsetMask> VectorMatroid::enumerate_bases() const {
    if (full_rank_ < k_)
        throw DomainError("enumerate_bases: ground set does not span the ambient space");
    std::vector<SubsetMask> bases;
    // k-combinations of {0..m-1} in lexicographic index order.
    std::vector<std::size_t> idx(k_);
    for (std::size_t i = 0; i < k_; ++i) idx[i] = i;
    for (;;) {
        SubsetMask s = SubsetMask::from_indices(idx);
        if (rank_of(s) == k_) bases.push_back(s);
        std::size_t i = k_;
        while (i > 0) {
            --i;
            if (idx[i] != i + m_ - k_) break;
            if (i == 0) return bases;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < k_; ++j) idx[j] = idx[j - 1] + 1;
    }
}

const std::vector<Flat>& VectorMatroid::enumerate_flats() const {
    {
        std::lock_guard lock(cache_mutex_);
        if (flats_ready_) return flats_cache_;
    }

    // Breadth-first walk of the flat lattice: every flat of rank r+1 is the
    // closure of (flat of rank r) + one element, so single-element extensions
    // from closure({}) reach everything.
    std::vector<Flat> flats;
    std::unordered_set<std::uint64_t> seen;
    std::vector<SubsetMask> frontier;

    const SubsetMask bottom = closure_of(SubsetMask{});
    flats.push_back({bottom, 0});
    seen.insert(bottom.bits);
    frontier.push_back(bottom);

    while (!frontier.empty()) {
        std::vector<SubsetMask> next;
        for (SubsetMask f : frontier) {
            for (std::size_t e = 0; e < m_; ++e) {
                if (f.test(e)) continue;
                const SubsetMask g = closure_of(f.with(e));
                if (seen.insert(g.bits).second) {
                    flats.push_back({g, rank_of(g)});
                    next.push_back(g);
                }
            }
        }
        frontier = std::move(next);
    }

    std::sort(flats.begin(), flats.end(), [](const Flat& a, const Flat& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.set < b.set;
    });

    std::lock_guard lock(cache_mutex_);
    if (!flats_ready_) {
        flats_cache_ = std::move(flats);
        flats_ready_ = true;
    }
    return flats_cache_;
}

ExactMatrix VectorMatroid::submatrix(SubsetMask s) const {
    check_subset(s);
    const auto idx = s.indices();
    ExactMatrix m(idx.size(), k_);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < k_; ++c) m.at(r, c) = vectors_[idx[r]][c];
    return m;
}

}  // namespace blform
