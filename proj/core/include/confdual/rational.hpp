#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>
#include <vector>

namespace confdual {

// Exact arithmetic carriers. Every reported value in this library is either
// a Rational or an exact log-form built from Rationals; floating point only
// ever appears as a display hint.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline BigInt rational_num(const Rational& r) { return BigInt(numerator(r)); }
inline BigInt rational_den(const Rational& r) { return BigInt(denominator(r)); }

// Renders "a" when the denominator is 1, "a/b" otherwise.
std::string to_string(const Rational& r);

// Accepts an integer literal or "a/b" with optional sign on a. Throws
// ParseError on malformed text or zero denominator.
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

// True iff r = 2^k for some integer k >= 0; k returned through *k_out.
bool is_power_of_two(const Rational& r, long* k_out = nullptr);

// Exact sign of sum_i coeff_i * log2(base_i), all coefficients rational and
// all bases rational > 0. Decided by clearing denominators in the exponents
// and comparing big-integer power products; no floating point involved.
int log_combination_sign(const std::vector<std::pair<Rational, Rational>>& terms);

// Rational enclosure [lo, hi] containing log2(x), x > 0, with width at most
// 2^-frac_bits. Interval squaring with directed rounding; exact endpoints.
std::pair<Rational, Rational> log2_enclosure(const Rational& x, int frac_bits = 48);

// value = shift + coeff * log2(base), base > 0. The carrier for guessing
// numbers and for reciprocals of rate bounds, where base is typically an
// independence number or a fractional chromatic number.
struct AffineLog {
    Rational shift;
    Rational coeff;
    Rational base;

    static AffineLog from_rational(const Rational& v) { return {v, 0, 1}; }
    double approx() const;
    // Exact rational value when one exists (coeff = 0 or base a power of 2).
    bool as_rational(Rational* out) const;
    std::string to_display_string() const;
};

int compare(const AffineLog& a, const AffineLog& b);
bool exact_equal(const AffineLog& a, const AffineLog& b);

// value = coeff / log2(base) with coeff >= 0 and base > 1, or +infinity.
// Rate bounds are kept in this form: r / log2(chi_f) and r / log2(alpha).
struct RateValue {
    Rational coeff;
    Rational base;
    bool infinite = false;

    static RateValue infinity() { return {0, 2, true}; }
    bool is_finite() const { return !infinite; }
    // Exact rational value when base = 2^k.
    bool as_rational(Rational* out) const;
    AffineLog reciprocal() const;  // (1/coeff) * log2(base); requires coeff > 0
    double approx() const;
    std::string to_display_string() const;
};

// Exact three-way compare; infinities compare greater than any finite value.
int compare(const RateValue& a, const RateValue& b);

}  // namespace confdual
