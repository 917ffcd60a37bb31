#include "chainscope/precision.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <cmath>

#include "chainscope/error.hpp"

namespace chainscope {
namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

Integer pow10(unsigned k) {
    Integer r = 1;
    for (unsigned i = 0; i < k; ++i) r *= 10;
    return r;
}

struct Decimal {
    Rational value;
    int last_digit_exponent = 0;  // one unit in the last digit is 10^this
};

// [-]digits[.digits][(e|E)[+-]digits]
std::optional<Decimal> parse_decimal(std::string_view s) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) negative = s[i++] == '-';
    Integer mantissa = 0;
    int frac_digits = 0;
    bool any_digit = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        mantissa = mantissa * 10 + (s[i++] - '0');
        any_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            mantissa = mantissa * 10 + (s[i++] - '0');
            ++frac_digits;
            any_digit = true;
        }
    }
    if (!any_digit) return std::nullopt;
    long exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool neg_exp = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg_exp = s[i++] == '-';
        if (i >= s.size()) return std::nullopt;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            exponent = exponent * 10 + (s[i++] - '0');
            if (exponent > 4000) return std::nullopt;
        }
        if (neg_exp) exponent = -exponent;
    }
    if (i != s.size()) return std::nullopt;
    const long scale = exponent - frac_digits;  // value = mantissa * 10^scale
    Decimal d;
    if (scale >= 0) d.value = Rational(mantissa * pow10(static_cast<unsigned>(scale)));
    else d.value = Rational(mantissa, pow10(static_cast<unsigned>(-scale)));
    if (negative) d.value = -d.value;
    d.last_digit_exponent = static_cast<int>(scale);
    return d;
}

Rational unit(int exponent) {
    if (exponent >= 0) return Rational(pow10(static_cast<unsigned>(exponent)));
    return Rational(Integer(1), pow10(static_cast<unsigned>(-exponent)));
}

std::optional<Rational> parse_fraction(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto num = parse_decimal(s.substr(0, slash));
    auto den = parse_decimal(s.substr(slash + 1));
    if (!num || !den || den->value == 0) return std::nullopt;
    return num->value / den->value;
}

// Enclosure of sqrt(k) - offset using an integer square root at 2^bits scale.
RealInterval sqrt_enclosure(unsigned k, const Rational& offset, const Rational& divisor, int bits,
                            std::string label) {
    const Integer scale = Integer(1) << bits;
    const Integer s = boost::multiprecision::sqrt(Integer(k) * scale * scale);  // floor
    RealInterval r;
    r.lo = (Rational(s, scale) - offset) / divisor;
    r.hi = (Rational(s + 1, scale) - offset) / divisor;
    r.label = std::move(label);
    return r;
}

RealInterval truncated_constant(std::string_view digits, std::string label) {
    // digits after the decimal point of a constant in [0, 1), truncated
    const Rational v = parse_decimal(std::string("0.") + std::string(digits))->value;
    RealInterval r;
    r.lo = v;
    r.hi = v + unit(-static_cast<int>(digits.size()));
    r.label = std::move(label);
    return r;
}

constexpr std::string_view kPiFraction =
    "1415926535897932384626433832795028841971693993751058209749445923";
constexpr std::string_view kEFraction =
    "7182818284590452353602874713526624977572470936999595749669676277";

}  // namespace

double RealInterval::to_double() const { return chainscope::to_double((lo + hi) / 2); }

std::optional<int> RealInterval::precision_bits() const {
    if (exact()) return std::nullopt;
    const Rational w = hi - lo;
    // -log2(w) via the bit lengths of numerator and denominator, then adjust.
    const Integer n = numerator(w), d = denominator(w);
    long e = static_cast<long>(boost::multiprecision::msb(d)) - static_cast<long>(boost::multiprecision::msb(n));
    // 2^-e is within a factor 2 of w; pick the largest b with 2^-b >= w.
    for (long b = e + 1; b >= e - 2; --b) {
        const Rational p = b >= 0 ? Rational(Integer(1), Integer(1) << b) : Rational(Integer(1) << -b);
        if (p >= w) return static_cast<int>(b);
    }
    return static_cast<int>(e - 2);
}

RealInterval RealInterval::exactly(const Rational& v, std::string label) {
    RealInterval r;
    r.lo = v;
    r.hi = v;
    r.label = label.empty() ? to_string(v) : std::move(label);
    return r;
}

RealInterval parse_real(std::string_view text) {
    const std::string label(text);
    if (text == "golden") return golden_conjugate();
    if (text == "sqrt2-1") return sqrt_enclosure(2, Rational(1), Rational(1), 200, label);
    if (text == "pi-3") return truncated_constant(kPiFraction, label);
    if (text == "e-2") return truncated_constant(kEFraction, label);
    if (auto f = parse_fraction(text)) return RealInterval::exactly(*f, label);
    auto d = parse_decimal(text);
    if (!d) invalid("cannot parse real number '" + label + "'",
                    "use p/q, a decimal such as 0.618034, or one of golden, sqrt2-1, pi-3, e-2");
    const bool integral = text.find_first_of(".eE") == std::string_view::npos;
    if (integral) return RealInterval::exactly(d->value, label);
    const Rational half_ulp = unit(d->last_digit_exponent) / 2;
    RealInterval r;
    r.lo = d->value - half_ulp;
    r.hi = d->value + half_ulp;
    r.label = label;
    return r;
}

Rational parse_rational(std::string_view text) {
    if (auto f = parse_fraction(text)) return *f;
    if (auto d = parse_decimal(text)) return d->value;
    invalid("cannot parse number '" + std::string(text) + "'", "use p/q or a decimal such as 1e-3");
}

RealInterval golden_conjugate(int bits) {
    return sqrt_enclosure(5, Rational(1), Rational(2), bits, "golden");
}

Integer floor_of(const Rational& x) {
    const Integer n = numerator(x), d = denominator(x);  // d > 0
    Integer q = n / d;                                   // truncates toward zero
    if (n < 0 && q * d != n) q -= 1;
    return q;
}

Integer ceil_of(const Rational& x) { return -floor_of(-x); }

double to_double(const Rational& x) { return x.convert_to<double>(); }

std::string to_string(const Rational& x) {
    const Integer d = denominator(x);
    if (d == 1) return numerator(x).str();
    return numerator(x).str() + "/" + d.str();
}

Rational simplest_between(const Rational& a, const std::optional<Rational>& b) {
    if (b && *b <= a) invalid("simplest_between: empty interval");
    const Integer fl = floor_of(a);
    if (!b || Rational(fl + 1) < *b) return Rational(fl + 1);
    // a and b lie in [fl, fl + 1]; write the answer as fl + 1/y with y in
    // (1/(b - fl), 1/(a - fl)).
    const Rational lower = 1 / (*b - fl);
    std::optional<Rational> upper;
    if (a != Rational(fl)) upper = 1 / (a - fl);
    const Rational y = simplest_between(lower, upper);
    return Rational(fl) + 1 / y;
}

}  // namespace chainscope
