#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "blform/errors.hpp"

namespace blform {

// Exact scalars. cpp_rational keeps gcd(|num|, den) = 1 and den > 0 after
// every operation, so the canonical-form invariant holds by construction.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p" (arbitrary precision, optional sign).
inline Rational parse_rational(const std::string& text) {
    try {
        Rational r(text);
        return r;
    } catch (const std::exception&) {
        throw InputError("not a rational: '" + text + "'");
    }
}

// Formats as "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.str(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// r^e for integer e; e < 0 requires r != 0.
inline Rational rational_pow(const Rational& r, long e) {
    if (e < 0) {
        if (r == 0) throw DomainError("rational_pow: zero base with negative exponent");
        return rational_pow(Rational(denominator(r), numerator(r)), -e);
    }
    Rational result = 1;
    Rational base = r;
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

}  // namespace blform
