#pragma once

// Closed-form values for the zoo: continued fractions and rotation recurrence
// times, the rotation and doubling-map formulas, the odometer period ladder.

#include <cstdint>
#include <optional>
#include <vector>

#include "chainscope/precision.hpp"

namespace chainscope {

struct ContinuedFraction {
    std::vector<Integer> quotients;   // a_0, a_1, ...
    std::vector<Integer> p, q;        // convergents p_k / q_k
    bool terminated = false;          // alpha is rational and the expansion ended
    std::optional<int> precision_bits;
};

// Up to K+1 partial quotients; fewer when a rational alpha terminates. Throws
// PrecisionExhausted when the enclosure cannot decide a quotient.
ContinuedFraction cf_expand(const RealInterval& alpha, std::size_t K);

// Best approximations of the second kind with denominator <= qmax: p/q such
// that |q alpha - p| < |s alpha - r| for every other r/s with 0 < s <= q.
// These are the convergents, except that a_0/1 is dropped when a_1 = 1
// (then (a_0 + 1)/1 is the better one).
std::vector<Rational> best_approximations(const RealInterval& alpha, const Integer& qmax);

// Smallest n >= 1 with ||n alpha|| < n eps, i.e. the smallest denominator of a
// fraction strictly inside (alpha - eps, alpha + eps).
Integer rotation_recurrence_time(const RealInterval& alpha, const Rational& eps);

// ceil(1 / (2 eps)).
Integer rotation_mixing_time(const Rational& eps);

// ceil(log2(1/eps)).
std::uint64_t doubling_recurrence_time(const Rational& eps);
// ceil(log2((1 + 2 eps) / (2 delta + 2 eps))), clamped at 0; needs delta > eps.
std::uint64_t doubling_mixing_time(const Rational& eps, const Rational& delta);

// Period of the eps-transition structure of the adding machine with strict
// jumps: 1 for eps > 1/2, else 2^k for eps in (2^-(k+1), 2^-k].
std::uint64_t odometer_k_ladder(const Rational& eps);

// Exact rational value of a double.
Rational exact_rational(double x);

}  // namespace chainscope
