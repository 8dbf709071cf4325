#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "blform/polytope.hpp"
#include "blform/rational.hpp"
#include "blform/subset_mask.hpp"
#include "blform/vector_matroid.hpp"

namespace blform {

// The matroid family behind the singular form: for a given n, the 4n+2
// ground vectors in Q^{2n+1} are, in order,
//   index 2j-2 : e_j            (j = 1..2n+1)
//   index 2j-1 : e_j - e_{j+1}  (j = 1..2n)
//   index 4n+1 : e_1 - e_2 + ... + e_{2n+1}
// so the basis vectors sit at even indices and the difference vectors at odd
// ones. All interval arithmetic below refers to this fixed order.
struct FamilyInstance {
    std::size_t n;
    std::size_t k;    // 2n+1
    std::size_t m;    // 4n+2
    unsigned ell;     // always 2
    VectorMatroid matroid;

    std::size_t alternating_index() const { return 4 * n + 1; }
};

// Basis enumeration is C(4n+2, 2n+1); past this cap an explicit override is
// required.
inline constexpr std::size_t kDefaultFamilyCap = 5;

FamilyInstance build_family(std::size_t n, bool allow_large = false);

// Point of the affine exponent slice P_delta: every 4-block sums to 2, the
// final pair sums to 1, and every coordinate is within delta of 1/2.
struct PDeltaPoint {
    ExponentTuple theta;
    Rational delta;
};

// Validates the P_delta invariants exactly; throws std::invalid_argument.
void validate_p_delta(const FamilyInstance& inst, const PDeltaPoint& point);

// Seeded sampler on the exact grid with the given denominator: each block's
// first three coordinates are drawn uniformly from the grid window around
// 1/2, the fourth is forced by the block sum and rejected when it leaves the
// box; the final pair has one free coordinate. Draws for item i come from
// stream (seed, i), so results do not depend on evaluation order.
std::vector<PDeltaPoint> sample_p_delta(const FamilyInstance& inst, const Rational& delta,
                                        std::size_t count, std::uint64_t seed,
                                        std::uint64_t grid_denominator = 1000);

struct PDeltaReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::optional<std::size_t> first_violation_index;
    std::optional<MembershipVerdict> first_violation;
    std::optional<Rational> min_margin;  // over the member samples
};

// Runs polytope membership over each sample.
PDeltaReport verify_p_delta_inclusion(const FamilyInstance& inst, const Rational& delta,
                                      const std::vector<PDeltaPoint>& samples,
                                      unsigned threads = 0);

// Contiguous ground-set interval [start, end] (inclusive, 0-based). The
// segment-estimate intervals run between basis vectors, so both endpoints
// must be even.
struct IntervalSet {
    std::size_t start;
    std::size_t end;

    SubsetMask mask() const {
        SubsetMask s;
        for (std::size_t i = start; i <= end; ++i) s = s.with(i);
        return s;
    }
};

// Every basis-vector-to-basis-vector interval of the instance.
std::vector<IntervalSet> all_intervals(const FamilyInstance& inst);

struct IntervalBound {
    bool holds;
    Rational slack;  // rank(S) - (1/2 - 3*delta + sum of theta over S)
};

// Exact evaluation of the segment estimate for one interval.
IntervalBound verify_interval_bound(const FamilyInstance& inst, const PDeltaPoint& theta,
                                    const IntervalSet& interval);

// For S avoiding the alternating vector and closed apart from it (the
// closure of S adds nothing, or only the alternating vector): the smallest j
// such that the dependent triple {e_j, e_j - e_{j+1}, e_{j+1}} lies in S, or
// nullopt when S is independent. A dependent such set with no triple
// falsifies the family's structure and raises PropertyViolation.
std::optional<std::size_t> find_dependent_triple(const FamilyInstance& inst, SubsetMask s);

struct Decomposition {
    SubsetMask independent_part;
    std::vector<IntervalSet> intervals;
};

// Splits S (same precondition as find_dependent_triple) into disjoint
// maximal basis-to-basis intervals plus an independent remainder, and checks
// rank additivity across the parts before returning.
Decomposition decompose_spanned(const FamilyInstance& inst, SubsetMask s);

struct BaseDetReport {
    std::size_t count = 0;
    bool all_unit = true;
};

// Enumerates all bases and tests |det Bhat| = 1 exactly for each.
BaseDetReport verify_all_base_dets(const FamilyInstance& inst, unsigned threads = 0);

// For every flat S containing the alternating vector a with
// a in span(S minus a) and an interval-only decomposition of S minus a,
// S must be the whole ground set. Returns the number of flats checked.
std::size_t verify_full_set_property(const FamilyInstance& inst);

struct InductionNeighborhood {
    Rational tau;
    std::array<PDeltaPoint, 6> points;  // +u1, -u1, +u2, -u2, +u3, -u3
};

// The six-point neighborhood of theta inside one 4-block: theta +- tau*u for
// u in {(1,1,-1,-1), (1,-1,1,-1), (1,-1,-1,1)} with
// tau = min_i (1/10 - |theta_{4*block+i} - 1/2|). Requires theta in P_{1/10}
// and tau > 0 (DomainError on block-boundary degeneracy).
InductionNeighborhood induction_neighborhood(const FamilyInstance& inst, std::size_t block,
                                             const PDeltaPoint& theta);

}  // namespace blform
