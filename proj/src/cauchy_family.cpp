#include "blform/cauchy_family.hpp"

#include <mutex>
#include <stdexcept>

#include "blform/errors.hpp"
#include "blform/rng.hpp"

namespace blform {

namespace {

const Rational kHalf(1, 2);
const Rational kTenth(1, 10);

Rational abs_diff_from_half(const Rational& v) {
    Rational d = v - kHalf;
    if (d < 0) d = -d;
    return d;
}

}  // namespace

FamilyInstance build_family(std::size_t n, bool allow_large) {
    if (n == 0) throw DomainError("build_family: n must be at least 1");
    if (n > kDefaultFamilyCap && !allow_large)
        throw DomainError("build_family: n exceeds the default cap; pass allow_large to override");

    const std::size_t k = 2 * n + 1;
    const std::size_t m = 4 * n + 2;
    std::vector<std::vector<Rational>> vectors(m, std::vector<Rational>(k, Rational(0)));
    for (std::size_t j = 1; j <= 2 * n + 1; ++j) vectors[2 * j - 2][j - 1] = 1;
    for (std::size_t j = 1; j <= 2 * n; ++j) {
        vectors[2 * j - 1][j - 1] = 1;
        vectors[2 * j - 1][j] = -1;
    }
    for (std::size_t c = 0; c < k; ++c) vectors[4 * n + 1][c] = (c % 2 == 0) ? 1 : -1;

    FamilyInstance inst{n, k, m, 2, VectorMatroid(k, std::move(vectors))};
    if (inst.matroid.full_rank() != k)
        throw PropertyViolation("build_family: ground set is not full rank");
    return inst;
}

void validate_p_delta(const FamilyInstance& inst, const PDeltaPoint& point) {
    const auto& theta = point.theta.theta;
    if (theta.size() != inst.m)
        throw std::invalid_argument("p_delta point: wrong tuple length");
    if (point.delta < 0 || point.delta > kHalf)
        throw std::invalid_argument("p_delta point: delta outside [0, 1/2]");
    for (std::size_t j = 0; j < inst.n; ++j) {
        Rational sum = 0;
        for (std::size_t i = 0; i < 4; ++i) sum += theta[4 * j + i];
        if (sum != 2)
            throw std::invalid_argument("p_delta point: block sum is not 2");
    }
    if (theta[4 * inst.n] + theta[4 * inst.n + 1] != 1)
        throw std::invalid_argument("p_delta point: final pair does not sum to 1");
    for (std::size_t i = 0; i < inst.m; ++i)
        if (abs_diff_from_half(theta[i]) > point.delta)
            throw std::invalid_argument("p_delta point: coordinate outside the delta box");
}

std::vector<PDeltaPoint> sample_p_delta(const FamilyInstance& inst, const Rational& delta,
                                        std::size_t count, std::uint64_t seed,
                                        std::uint64_t grid_denominator) {
    if (delta < 0) throw DomainError("sample_p_delta: delta must be nonnegative");
    if (delta > kHalf) throw DomainError("sample_p_delta: delta must be at most 1/2");
    if (grid_denominator == 0 || grid_denominator % 2 != 0)
        throw std::invalid_argument("sample_p_delta: grid denominator must be even and positive");

    const Int d_int(grid_denominator);
    // Grid window [lo, hi] = integer points of [D*(1/2-delta), D*(1/2+delta)];
    // both bounds are nonnegative and the window always contains D/2.
    const Rational lo_r = (kHalf - delta) * d_int;
    const Rational hi_r = (kHalf + delta) * d_int;
    const Int lo = (numerator(lo_r) + denominator(lo_r) - 1) / denominator(lo_r);
    const Int hi = numerator(hi_r) / denominator(hi_r);
    const auto lo64 = lo.convert_to<std::uint64_t>();
    const auto hi64 = hi.convert_to<std::uint64_t>();

    auto grid_value = [&](std::uint64_t t) { return Rational(Int(t), d_int); };

    std::vector<PDeltaPoint> out(count, PDeltaPoint{ExponentTuple{}, delta});
    for (std::size_t item = 0; item < count; ++item) {
        RngStream rng(seed, item);
        std::vector<Rational> theta(inst.m);
        for (std::size_t j = 0; j < inst.n; ++j) {
            for (int attempt = 0;; ++attempt) {
                if (attempt > 100000)
                    throw DomainError("sample_p_delta: block rejection did not terminate");
                const std::uint64_t t1 = rng.next_in_range(lo64, hi64);
                const std::uint64_t t2 = rng.next_in_range(lo64, hi64);
                const std::uint64_t t3 = rng.next_in_range(lo64, hi64);
                const Int t4 = Int(2) * d_int - Int(t1) - Int(t2) - Int(t3);
                if (t4 < lo || t4 > hi) continue;
                theta[4 * j] = grid_value(t1);
                theta[4 * j + 1] = grid_value(t2);
                theta[4 * j + 2] = grid_value(t3);
                theta[4 * j + 3] = Rational(t4, d_int);
                break;
            }
        }
        const std::uint64_t tp = rng.next_in_range(lo64, hi64);
        theta[4 * inst.n] = grid_value(tp);
        theta[4 * inst.n + 1] = Rational(d_int - Int(tp), d_int);
        out[item].theta.theta = std::move(theta);
        validate_p_delta(inst, out[item]);
    }
    return out;
}

PDeltaReport verify_p_delta_inclusion(const FamilyInstance& inst, const Rational& delta,
                                      const std::vector<PDeltaPoint>& samples, unsigned threads) {
    for (const auto& s : samples) {
        if (s.delta > delta)
            throw std::invalid_argument("verify_p_delta_inclusion: sample delta exceeds sweep delta");
        validate_p_delta(inst, s);
    }
    inst.matroid.enumerate_flats();  // build once, before the parallel sweep

    std::vector<MembershipVerdict> verdicts(samples.size());
    parallel_for(samples.size(), threads,
                 [&](std::size_t i) { verdicts[i] = membership(inst.matroid, samples[i].theta); });

    PDeltaReport report;
    report.samples = samples.size();
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        if (v.member) {
            if (!report.min_margin || *v.margin < *report.min_margin) report.min_margin = v.margin;
        } else {
            ++report.violations;
            if (!report.first_violation_index) {
                report.first_violation_index = i;
                report.first_violation = v;
            }
        }
    }
    return report;
}

std::vector<IntervalSet> all_intervals(const FamilyInstance& inst) {
    std::vector<IntervalSet> out;
    for (std::size_t s = 0; s <= 4 * inst.n; s += 2)
        for (std::size_t t = s; t <= 4 * inst.n; t += 2) out.push_back({s, t});
    return out;
}

namespace {

void check_interval(const FamilyInstance& inst, const IntervalSet& interval) {
    if (interval.start % 2 != 0 || interval.end % 2 != 0)
        throw std::invalid_argument("interval endpoints must be basis-vector (even) indices");
    if (interval.start > interval.end || interval.end > 4 * inst.n)
        throw std::invalid_argument("interval out of range");
}

// The structure arguments need S closed among the basis/difference vectors;
// the closure may additionally pick up the alternating vector (S is then a
// flat of the deletion), which none of the interval arithmetic touches.
void check_flat_without_alternating(const FamilyInstance& inst, SubsetMask s, const char* who) {
    inst.matroid.check_subset(s);
    if (s.test(inst.alternating_index()))
        throw std::invalid_argument(std::string(who) + ": set must avoid the alternating vector");
    const SubsetMask closure = inst.matroid.closure_of(s);
    if (closure != s && closure != s.with(inst.alternating_index()))
        throw std::invalid_argument(std::string(who) + ": set is not closed off the alternating vector");
}

// Smallest j with {e_j, e_j - e_{j+1}, e_{j+1}} inside s, scanning the fixed
// ground order; no flatness assumption.
std::optional<std::size_t> scan_for_triple(const FamilyInstance& inst, SubsetMask s) {
    for (std::size_t j = 1; j <= 2 * inst.n; ++j) {
        const std::size_t base = 2 * j - 2;
        if (s.test(base) && s.test(base + 1) && s.test(base + 2)) return j;
    }
    return std::nullopt;
}

}  // namespace

IntervalBound verify_interval_bound(const FamilyInstance& inst, const PDeltaPoint& theta,
                                    const IntervalSet& interval) {
    check_interval(inst, interval);
    validate_p_delta(inst, theta);
    const SubsetMask s = interval.mask();
    Rational sum = 0;
    for (std::size_t i : s.indices()) sum += theta.theta.theta[i];
    const Rational rank(inst.matroid.rank_of(s));
    const Rational slack = rank - (kHalf - 3 * theta.delta + sum);
    return {slack >= 0, slack};
}

std::optional<std::size_t> find_dependent_triple(const FamilyInstance& inst, SubsetMask s) {
    check_flat_without_alternating(inst, s, "find_dependent_triple");
    if (inst.matroid.is_independent(s)) return std::nullopt;
    const auto j = scan_for_triple(inst, s);
    if (!j)
        throw PropertyViolation("find_dependent_triple: dependent flat contains no triple");
    return j;
}

Decomposition decompose_spanned(const FamilyInstance& inst, SubsetMask s) {
    check_flat_without_alternating(inst, s, "decompose_spanned");

    Decomposition result;
    SubsetMask rest = s;
    while (!inst.matroid.is_independent(rest)) {
        const auto j = scan_for_triple(inst, rest);
        if (!j)
            throw PropertyViolation("decompose_spanned: dependent remainder contains no triple");
        // Maximal contiguous run around the triple, stopping before the
        // alternating vector.
        std::size_t a = 2 * *j - 2;
        std::size_t b = 2 * *j;
        while (a > 0 && rest.test(a - 1)) --a;
        while (b < 4 * inst.n && rest.test(b + 1)) ++b;
        if (a % 2 != 0 || b % 2 != 0)
            throw PropertyViolation("decompose_spanned: maximal run has a difference-vector endpoint");
        const IntervalSet interval{a, b};
        result.intervals.push_back(interval);
        rest = rest - interval.mask();
    }
    result.independent_part = rest;

    std::size_t rank_sum = inst.matroid.rank_of(rest);
    for (const IntervalSet& interval : result.intervals)
        rank_sum += inst.matroid.rank_of(interval.mask());
    if (rank_sum != inst.matroid.rank_of(s))
        throw PropertyViolation("decompose_spanned: rank additivity failed");
    return result;
}

BaseDetReport verify_all_base_dets(const FamilyInstance& inst, unsigned threads) {
    const auto bases = inst.matroid.enumerate_bases();
    std::vector<char> unit(bases.size(), 0);
    parallel_for(bases.size(), threads, [&](std::size_t i) {
        Rational det = determinant(inst.matroid.submatrix(bases[i]));
        if (det < 0) det = -det;
        unit[i] = (det == 1) ? 1 : 0;
    });
    BaseDetReport report;
    report.count = bases.size();
    for (char u : unit)
        if (!u) report.all_unit = false;
    return report;
}

std::size_t verify_full_set_property(const FamilyInstance& inst) {
    const std::size_t alt = inst.alternating_index();
    const SubsetMask full = SubsetMask::full(inst.m);
    std::size_t checked = 0;
    for (const Flat& flat : inst.matroid.enumerate_flats()) {
        if (!flat.set.test(alt)) continue;
        const SubsetMask rest = flat.set.without(alt);
        if (inst.matroid.rank_of(rest) != flat.rank) continue;  // alt not in span(rest)
        const Decomposition d = decompose_spanned(inst, rest);
        if (!d.independent_part.empty()) continue;
        ++checked;
        if (!(flat.set == full))
            throw PropertyViolation("full-set property: interval-only spanned flat is proper");
    }
    return checked;
}

InductionNeighborhood induction_neighborhood(const FamilyInstance& inst, std::size_t block,
                                             const PDeltaPoint& theta) {
    if (block >= inst.n) throw std::invalid_argument("induction_neighborhood: block out of range");
    PDeltaPoint tenth = theta;
    tenth.delta = kTenth;
    validate_p_delta(inst, tenth);  // the six points can only live in P_{1/10}

    Rational tau = kTenth;
    for (std::size_t i = 0; i < 4; ++i) {
        const Rational gap = kTenth - abs_diff_from_half(theta.theta.theta[4 * block + i]);
        if (gap < tau) tau = gap;
    }
    if (tau == 0)
        throw DomainError("induction_neighborhood: theta lies on the block boundary");

    static constexpr int kDirections[3][4] = {{1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    InductionNeighborhood out{tau, {}};
    std::size_t slot = 0;
    for (const auto& u : kDirections) {
        for (int sign : {+1, -1}) {
            PDeltaPoint p = tenth;
            for (std::size_t i = 0; i < 4; ++i)
                p.theta.theta[4 * block + i] += Rational(sign * u[i]) * tau;
            try {
                validate_p_delta(inst, p);
            } catch (const std::invalid_argument& e) {
                throw PropertyViolation(std::string("induction_neighborhood: point left P_delta: ") +
                                        e.what());
            }
            out.points[slot++] = std::move(p);
        }
    }
    return out;
}

}  // namespace blform
