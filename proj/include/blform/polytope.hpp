#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "blform/exact_matrix.hpp"
#include "blform/rational.hpp"
#include "blform/subset_mask.hpp"
#include "blform/vector_matroid.hpp"

namespace blform {

// A positive extended rational; the secondary Lorentz index (infinity allowed).
struct LorentzIndex {
    bool infinite = true;
    Rational value = 0;  // meaningful when !infinite

    static LorentzIndex inf() { return {}; }
    static LorentzIndex finite(Rational v) { return {false, std::move(v)}; }
};

// Candidate reciprocal-exponent tuple theta, one entry per ground vector.
struct ExponentTuple {
    std::vector<Rational> theta;
    std::optional<std::vector<LorentzIndex>> lorentz_q;

    static ExponentTuple constant(std::size_t m, const Rational& value) {
        return {std::vector<Rational>(m, value), std::nullopt};
    }
    static ExponentTuple indicator(SubsetMask s, std::size_t m) {
        ExponentTuple t{std::vector<Rational>(m, Rational(0)), std::nullopt};
        for (std::size_t i : s.indices()) t.theta[i] = 1;
        return t;
    }

    Rational sum() const {
        Rational s = 0;
        for (const auto& x : theta) s += x;
        return s;
    }
};

struct BoxViolation {
    std::size_t index;
    Rational value;
};

struct HyperplaneViolation {
    Rational sum;
    std::size_t expected;  // the ambient dimension k
};

struct RankViolation {
    SubsetMask subset;
    std::size_t rank;
    Rational theta_sum;
};

using Violation = std::variant<BoxViolation, HyperplaneViolation, RankViolation>;

// Outcome of a polytope membership test. `margin` is present exactly when
// the point is a member; `violation` carries the first failed constraint
// otherwise (box constraints in index order, then the hyperplane, then the
// flat rank inequalities in flat-list order).
struct MembershipVerdict {
    bool member = false;
    std::optional<Rational> margin;
    std::optional<Violation> violation;
};

// Decides theta in Omega_M: sum(theta) = k, theta in [0,1]^m, and
// sum_{i in S} theta_i <= rank(S) for every flat S. Checking flats only is
// sufficient: replacing S by its closure keeps the rank and, with theta >= 0,
// can only grow the left side.
MembershipVerdict membership(const VectorMatroid& m, const ExponentTuple& theta);

// Minimum slack of theta against every nonempty proper flat inequality and
// the [0,1] box, for theta on the hyperplane sum = k (else DomainError).
// Positive iff theta is in the relative interior, zero on the boundary,
// negative outside. The empty flat's vacuous 0 <= 0 constraint is skipped.
Rational margin(const VectorMatroid& m, const ExponentTuple& theta);

// Indicator tuples of all bases, in enumerate_bases order.
std::vector<ExponentTuple> vertices(const VectorMatroid& m);

// max over bases B of |det Bhat|^{-ell}, the interpolation constant of the
// Lebesgue-space bound.
Rational bl_constant(const VectorMatroid& m, unsigned ell);

struct BasisSubstitution {
    ExactMatrix transform;  // rows = basis vectors in ground-set order
    Rational constant;      // |det|^{-ell}
};

// The change-of-variables data for one basis: the matrix whose rows are the
// basis vectors and the bound coefficient |det|^{-ell}.
BasisSubstitution basis_substitution(const VectorMatroid& m, SubsetMask basis, unsigned ell);

}  // namespace blform
