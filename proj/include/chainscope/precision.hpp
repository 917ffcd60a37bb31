#pragma once

// Exact rationals and rational enclosures of real parameters.
//
// An irrational parameter (rotation angle, golden ratio, ...) is carried as a
// closed interval [lo, hi] with rational endpoints known to contain it.
// Anything computed from it either comes out the same for every point of the
// interval or raises PrecisionExhausted.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace chainscope {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct RealInterval {
    Rational lo;
    Rational hi;
    std::string label;  // how the value was given, for reports

    bool exact() const { return lo == hi; }
    double to_double() const;  // midpoint
    // floor(-log2(hi - lo)); empty for exact values.
    std::optional<int> precision_bits() const;

    static RealInterval exactly(const Rational& v, std::string label = {});
};

// Accepts "p/q" and integers (exact), decimals / scientific notation (interval
// of half a unit in the last digit), and the named constants "golden"
// ((sqrt5-1)/2), "sqrt2-1", "pi-3", "e-2".
RealInterval parse_real(std::string_view text);

// Exact parse of "p/q", integers and decimals ("1e-3" is exactly 1/1000). Used
// for tolerances, which are chosen rather than measured.
Rational parse_rational(std::string_view text);

// (sqrt5 - 1)/2 enclosed to about `bits` bits.
RealInterval golden_conjugate(int bits = 200);

Integer floor_of(const Rational& x);
Integer ceil_of(const Rational& x);
double to_double(const Rational& x);
std::string to_string(const Rational& x);

// Fraction with the smallest denominator strictly inside (a, b); b may be
// absent for +infinity. Among equal denominators the smallest numerator wins.
Rational simplest_between(const Rational& a, const std::optional<Rational>& b);

}  // namespace chainscope
