#include "blform/polytope.hpp"

#include <stdexcept>

#include "blform/errors.hpp"

namespace blform {

namespace {

void check_length(const VectorMatroid& m, const ExponentTuple& theta) {
    if (theta.theta.size() != m.size())
        throw std::invalid_argument("exponent tuple length does not match ground-set size");
}

// theta rescaled to integer numerators over a common denominator, so the
// per-flat sums run on plain big integers instead of normalizing rationals.
struct ScaledTuple {
    Int denom = 1;
    std::vector<Int> nums;

    explicit ScaledTuple(const std::vector<Rational>& theta) {
        for (const Rational& v : theta) denom = boost::multiprecision::lcm(denom, denominator(v));
        nums.reserve(theta.size());
        for (const Rational& v : theta) nums.push_back(numerator(v) * (denom / denominator(v)));
    }

    Int flat_sum(SubsetMask s) const {
        Int sum = 0;
        for (std::size_t i : s.indices()) sum += nums[i];
        return sum;
    }
};

}  // namespace

MembershipVerdict membership(const VectorMatroid& m, const ExponentTuple& theta) {
    check_length(m, theta);
    const std::size_t k = m.dimension();

    for (std::size_t i = 0; i < theta.theta.size(); ++i) {
        const Rational& v = theta.theta[i];
        if (v < 0 || v > 1)
            return {false, std::nullopt, Violation{BoxViolation{i, v}}};
    }

    const Rational total = theta.sum();
    if (total != Rational(k))
        return {false, std::nullopt, Violation{HyperplaneViolation{total, k}}};

    const ScaledTuple scaled(theta.theta);
    const SubsetMask full = SubsetMask::full(m.size());

    // Track the margin while scanning: min slack over nonempty proper flats,
    // then over the box distances.
    std::optional<Int> min_slack;
    for (const Flat& flat : m.enumerate_flats()) {
        if (flat.set.empty()) continue;
        const Int sum = scaled.flat_sum(flat.set);
        const Int slack = Int(flat.rank) * scaled.denom - sum;
        if (slack < 0)
            return {false, std::nullopt,
                    Violation{RankViolation{flat.set, flat.rank, Rational(sum, scaled.denom)}}};
        if (flat.set == full) continue;  // implied by the hyperplane when full rank
        if (!min_slack || slack < *min_slack) min_slack = slack;
    }

    Int result = min_slack ? *min_slack : Int(k) * scaled.denom;
    for (const Int& num : scaled.nums) {
        if (num < result) result = num;
        const Int upper = scaled.denom - num;
        if (upper < result) result = upper;
    }
    return {true, Rational(result, scaled.denom), std::nullopt};
}

Rational margin(const VectorMatroid& m, const ExponentTuple& theta) {
    check_length(m, theta);
    const std::size_t k = m.dimension();
    if (theta.sum() != Rational(k))
        throw DomainError("margin: theta is not on the hyperplane sum = k");

    const ScaledTuple scaled(theta.theta);
    const SubsetMask full = SubsetMask::full(m.size());
    std::optional<Int> result;
    auto consider = [&](const Int& slack) {
        if (!result || slack < *result) result = slack;
    };

    for (const Flat& flat : m.enumerate_flats()) {
        if (flat.set.empty()) continue;
        if (flat.set == full && flat.rank == k) continue;  // hyperplane makes it an equality
        consider(Int(flat.rank) * scaled.denom - scaled.flat_sum(flat.set));
    }
    for (const Int& num : scaled.nums) {
        consider(num);
        consider(scaled.denom - num);
    }
    return Rational(*result, scaled.denom);  // m >= 1: the box contributes terms
}

std::vector<ExponentTuple> vertices(const VectorMatroid& m) {
    std::vector<ExponentTuple> out;
    for (SubsetMask basis : m.enumerate_bases())
        out.push_back(ExponentTuple::indicator(basis, m.size()));
    return out;
}

Rational bl_constant(const VectorMatroid& m, unsigned ell) {
    if (ell < 1) throw std::invalid_argument("bl_constant: ell must be >= 1");
    std::optional<Rational> best;
    for (SubsetMask basis : m.enumerate_bases()) {
        const Rational c = basis_substitution(m, basis, ell).constant;
        if (!best || c > *best) best = c;
    }
    return *best;  // enumerate_bases throws when no basis exists
}

BasisSubstitution basis_substitution(const VectorMatroid& m, SubsetMask basis, unsigned ell) {
    m.check_subset(basis);
    if (basis.count() != m.dimension() || m.rank_of(basis) != m.dimension())
        throw DomainError("basis_substitution: subset is not a basis");
    ExactMatrix bhat = m.submatrix(basis);
    Rational det = determinant(bhat);
    if (det < 0) det = -det;
    return {std::move(bhat), rational_pow(det, -static_cast<long>(ell))};
}

}  // namespace blform
