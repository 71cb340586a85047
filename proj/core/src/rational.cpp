#include "confdual/rational.hpp"

#include "confdual/errors.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace confdual {

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { throw ParseError("invalid rational literal '" + text + "'"); };
    if (text.empty()) bad();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        std::string num = text.substr(0, slash);
        std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty() || den.find('/') != std::string::npos) bad();
        BigInt n(num), d(den);
        if (d == 0) throw ParseError("zero denominator in '" + text + "'");
        return Rational(n, d);
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const ParseError*>(&e)) throw;
        bad();
    }
    return 0;  // unreachable
}

double to_double(const Rational& r) { return static_cast<double>(r); }

bool is_power_of_two(const Rational& r, long* k_out) {
    if (r <= 0 || denominator(r) != 1) return false;
    BigInt n = rational_num(r);
    unsigned bit = lsb(n);
    if ((n >> bit) != 1) return false;
    if (k_out) *k_out = static_cast<long>(bit);
    return true;
}

namespace {

BigInt lcm_big(const BigInt& a, const BigInt& b) { return a / gcd(a, b) * b; }

BigInt pow_big(const BigInt& base, const BigInt& exp) {
    if (exp < 0) throw InvalidInput("negative exponent in power comparison");
    return pow(base, exp.convert_to<unsigned>());
}

}  // namespace

int log_combination_sign(const std::vector<std::pair<Rational, Rational>>& terms) {
    BigInt common = 1;
    for (const auto& [coeff, base] : terms) {
        if (base <= 0) throw InvalidInput("log2 of non-positive base");
        common = lcm_big(common, rational_den(coeff));
    }
    // sum coeff_i*log2(base_i) has the sign of log2(prod base_i^(coeff_i*K)),
    // i.e. of N - D where prod = N/D with positive integer exponents.
    BigInt lhs = 1, rhs = 1;
    for (const auto& [coeff, base] : terms) {
        BigInt e = rational_num(coeff) * (common / rational_den(coeff));
        if (e == 0) continue;
        BigInt n = rational_num(base), d = rational_den(base);
        if (e > 0) {
            lhs *= pow_big(n, e);
            rhs *= pow_big(d, e);
        } else {
            lhs *= pow_big(d, -e);
            rhs *= pow_big(n, -e);
        }
    }
    return lhs.compare(rhs);
}

std::pair<Rational, Rational> log2_enclosure(const Rational& x, int frac_bits) {
    if (x <= 0) throw InvalidInput("log2 of non-positive value");
    if (frac_bits < 1 || frac_bits > 256) throw InvalidInput("log2 precision out of range");
    // Integer part: the unique e with 2^e <= x < 2^{e+1}.
    long e = static_cast<long>(msb(rational_num(x))) - static_cast<long>(msb(rational_den(x)));
    Rational scaled = e >= 0 ? x / Rational(BigInt(1) << e) : x * Rational(BigInt(1) << -e);
    if (scaled >= 2) {
        ++e;
        scaled /= 2;
    } else if (scaled < 1) {
        --e;
        scaled *= 2;
    }
    // Mantissa interval [lo, hi] / 2^P around scaled, squared once per
    // output bit and re-truncated to P bits so the widths stay bounded. If
    // the interval ever straddles 2 before enough bits are out, the whole
    // pass reruns at double the precision; a straddle needs the remaining
    // mantissa to sit within the interval width of a dyadic breakpoint, so
    // doubling P separates it eventually.
    for (int P = frac_bits + 16;; P *= 2) {
        const BigInt one = BigInt(1) << P;
        const BigInt two = one << 1;
        BigInt lo = (rational_num(scaled) << P) / rational_den(scaled);
        BigInt hi = lo + 1;
        Rational frac_lo = 0;
        Rational step(1, 2);
        int emitted = 0;
        bool straddled = false;
        while (emitted < frac_bits) {
            BigInt lo2 = lo * lo >> P;
            BigInt hi2 = ((hi * hi + one) - 1) >> P;
            if (hi2 < two) {
                lo = lo2;
                hi = hi2;
            } else if (lo2 >= two) {
                frac_lo += step;
                lo = lo2 >> 1;
                hi = (hi2 + 1) >> 1;
            } else {
                straddled = true;
                break;
            }
            ++emitted;
            step /= 2;
        }
        if (!straddled) return {Rational(e) + frac_lo, Rational(e) + frac_lo + step * 2};
    }
}

double AffineLog::approx() const {
    return to_double(shift) + to_double(coeff) * std::log2(to_double(base));
}

bool AffineLog::as_rational(Rational* out) const {
    if (coeff == 0 || base == 1) {
        if (out) *out = shift;
        return true;
    }
    long k = 0;
    if (is_power_of_two(base, &k)) {
        if (out) *out = shift + coeff * k;
        return true;
    }
    Rational inv = Rational(rational_den(base), rational_num(base));
    if (is_power_of_two(inv, &k)) {
        if (out) *out = shift - coeff * k;
        return true;
    }
    return false;
}

std::string AffineLog::to_display_string() const {
    Rational v;
    if (as_rational(&v)) return to_string(v);
    std::ostringstream os;
    if (shift != 0) os << to_string(shift) << " + ";
    os << to_string(coeff) << "*log2(" << to_string(base) << ")";
    return os.str();
}

int compare(const AffineLog& a, const AffineLog& b) {
    return log_combination_sign(
        {{a.coeff, a.base}, {-b.coeff, b.base}, {a.shift - b.shift, 2}});
}

bool exact_equal(const AffineLog& a, const AffineLog& b) { return compare(a, b) == 0; }

bool RateValue::as_rational(Rational* out) const {
    if (infinite) return false;
    long k = 0;
    if (!is_power_of_two(base, &k) || k == 0) return false;
    if (out) *out = coeff / k;
    return true;
}

AffineLog RateValue::reciprocal() const {
    if (infinite) return {0, 0, 1};
    if (coeff <= 0) throw InvalidInput("reciprocal of a zero rate value");
    return {0, Rational(1) / coeff, base};
}

double RateValue::approx() const {
    if (infinite) return std::numeric_limits<double>::infinity();
    return to_double(coeff) / std::log2(to_double(base));
}

std::string RateValue::to_display_string() const {
    if (infinite) return "inf";
    Rational v;
    if (as_rational(&v)) return to_string(v);
    return to_string(coeff) + "/log2(" + to_string(base) + ")";
}

int compare(const RateValue& a, const RateValue& b) {
    if (a.infinite || b.infinite) {
        if (a.infinite && b.infinite) return 0;
        return a.infinite ? 1 : -1;
    }
    if (a.base <= 1 || b.base <= 1) throw InvalidInput("rate value base must exceed 1");
    // a.coeff/log2(a.base) vs b.coeff/log2(b.base), both denominators > 0.
    return log_combination_sign({{a.coeff, b.base}, {-b.coeff, a.base}});
}

}  // namespace confdual
