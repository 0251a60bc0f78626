#ifndef FOCKSPEC_RATIONAL_HPP
#define FOCKSPEC_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fockspec {

/// Exact rational scalar. mpq_class results are always canonical; values built from a
/// numerator/denominator pair go through rat() so the invariant holds everywhere.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rat(const Integer& num, const Integer& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p" or "p/q".
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "-p" or "p/q" (q > 0). Throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto valid = [](std::string_view t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid(num, true) || !valid(den, false)) throw std::invalid_argument("not a rational: '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return rat(n, d);
}

/// Values of named scalar parameters.
using Bindings = std::map<std::string, Rational, std::less<>>;

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// k(k-1)...(k-j+1); zero when j > k.
inline Integer falling_factorial(std::size_t k, std::size_t j) {
    if (j > k) return 0;
    Integer out = 1;
    for (std::size_t t = 0; t < j; ++t) out *= static_cast<unsigned long>(k - t);
    return out;
}

inline Integer binomial(std::size_t n, std::size_t k) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

inline Integer factorial(std::size_t n) {
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_RATIONAL_HPP
