#include "chainscope/oracles.hpp"

#include <cmath>

#include "chainscope/error.hpp"

namespace chainscope {
namespace {

[[noreturn]] void exhausted(const RealInterval& alpha, const std::string& what) {
    const auto bits = alpha.precision_bits();
    throw Error(ErrorKind::PrecisionExhausted,
                what + " for alpha=" + alpha.label + " (about " + std::to_string(bits ? *bits : 0) + " bits)",
                "give alpha as an exact fraction p/q, with more decimal digits, or as a named constant");
}

// Continued fraction expansion of every number in [lo, hi] at once.
class Expander {
public:
    explicit Expander(const RealInterval& alpha) : alpha_(alpha), lo_(alpha.lo), hi_(alpha.hi) {}

    // Next partial quotient; empty once a rational alpha has terminated.
    std::optional<Integer> next() {
        if (done_) return std::nullopt;
        const Integer a = floor_of(lo_);
        if (floor_of(hi_) != a) exhausted(alpha_, "partial quotient not determined");
        const Rational flo = lo_ - a, fhi = hi_ - a;
        if (flo == 0 && fhi == 0) {
            done_ = true;
        } else if (flo == 0) {
            // the enclosure touches a rational where the expansion may end
            exhausted(alpha_, "partial quotient not determined");
        } else {
            lo_ = 1 / fhi;
            hi_ = 1 / flo;
        }
        return a;
    }

private:
    const RealInterval& alpha_;
    Rational lo_, hi_;
    bool done_ = false;
};

}  // namespace

Rational exact_rational(double x) {
    if (!std::isfinite(x)) invalid("non-finite number");
    int exp = 0;
    const double mant = std::frexp(x, &exp);
    const auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{Integer(m)};
    if (exp >= 0) r *= Rational(Integer(1) << exp);
    else r /= Rational(Integer(1) << -exp);
    return r;
}

ContinuedFraction cf_expand(const RealInterval& alpha, std::size_t K) {
    if (alpha.lo < 0 || alpha.hi >= 1) invalid("cf_expand needs 0 <= alpha < 1");
    ContinuedFraction cf;
    cf.precision_bits = alpha.precision_bits();
    Expander ex(alpha);
    Integer p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    for (std::size_t k = 0; k <= K; ++k) {
        auto a = ex.next();
        if (!a) {
            cf.terminated = true;
            break;
        }
        const Integer p = *a * p_prev + p_prev2, q = *a * q_prev + q_prev2;
        cf.quotients.push_back(*a);
        cf.p.push_back(p);
        cf.q.push_back(q);
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
    }
    if (!cf.terminated && alpha.exact()) {
        // an exact rational whose last quotient was emitted exactly at K
        Rational last(cf.p.back(), cf.q.back());
        cf.terminated = last == alpha.lo;
    }
    return cf;
}

std::vector<Rational> best_approximations(const RealInterval& alpha, const Integer& qmax) {
    if (alpha.lo < 0 || alpha.hi >= 1) invalid("best_approximations needs 0 <= alpha < 1");
    if (qmax < 1) invalid("best_approximations needs qmax >= 1");
    std::vector<Rational> out;
    Expander ex(alpha);
    Integer p_prev = 1, q_prev = 0, p_prev2 = 0, q_prev2 = 1;
    for (std::size_t k = 0;; ++k) {
        auto a = ex.next();
        if (!a) break;
        const Integer p = *a * p_prev + p_prev2, q = *a * q_prev + q_prev2;
        if (q > qmax) break;
        if (k == 1 && *a == 1) out.pop_back();  // a_0/1 is beaten by (a_0 + 1)/1
        out.emplace_back(p, q);
        p_prev2 = p_prev;
        q_prev2 = q_prev;
        p_prev = p;
        q_prev = q;
    }
    return out;
}

Integer rotation_recurrence_time(const RealInterval& alpha, const Rational& eps) {
    if (eps <= 0) invalid("eps must be positive");
    // Every alpha in [lo, hi] has its window inside (lo - eps, hi + eps) and
    // containing (hi - eps, lo + eps); equal answers on both settle it.
    const Rational outer = simplest_between(alpha.lo - eps, alpha.hi + eps);
    if (alpha.exact()) return boost::multiprecision::denominator(outer);
    if (alpha.hi - eps >= alpha.lo + eps) exhausted(alpha, "eps is below the precision of alpha");
    const Rational inner = simplest_between(alpha.hi - eps, alpha.lo + eps);
    const Integer qo = boost::multiprecision::denominator(outer), qi = boost::multiprecision::denominator(inner);
    if (qo != qi) exhausted(alpha, "recurrence time not determined");
    return qo;
}

Integer rotation_mixing_time(const Rational& eps) {
    if (eps <= 0) invalid("eps must be positive");
    return ceil_of(1 / (2 * eps));
}

std::uint64_t doubling_recurrence_time(const Rational& eps) {
    if (eps <= 0) invalid("eps must be positive");
    std::uint64_t r = 0;
    Rational p(1);
    while (p > eps) {  // smallest r with 2^-r <= eps
        p /= 2;
        ++r;
    }
    return r;
}

std::uint64_t doubling_mixing_time(const Rational& eps, const Rational& delta) {
    if (eps <= 0) invalid("eps must be positive");
    if (delta <= eps) invalid("the doubling-map mixing time needs delta > eps");
    const Rational target = (1 + 2 * eps) / (2 * delta + 2 * eps);
    std::uint64_t m = 0;
    Rational p(1);
    while (p < target) {  // smallest m with 2^m >= target
        p *= 2;
        ++m;
    }
    return m;
}

std::uint64_t odometer_k_ladder(const Rational& eps) {
    if (eps <= 0) invalid("eps must be positive");
    if (eps > Rational(1, 2)) return 1;
    std::uint64_t k = 1;
    Rational lower(1, 4);  // eps in (2^-(k+1), 2^-k]
    while (!(eps > lower)) {
        lower /= 2;
        ++k;
        if (k >= 63) invalid("eps too small for a 64-bit odometer period");
    }
    return std::uint64_t{1} << k;
}

}  // namespace chainscope
