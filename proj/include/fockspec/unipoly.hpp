#ifndef FOCKSPEC_UNIPOLY_HPP
#define FOCKSPEC_UNIPOLY_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockspec/rational.hpp"

namespace fockspec {

/// Dense univariate polynomial over Q; coeffs()[k] multiplies x^k.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    UniPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

    static UniPoly monomial(std::size_t k, const Rational& c = 1) {
        std::vector<Rational> v(k + 1);
        v[k] = c;
        return UniPoly(std::move(v));
    }
    static UniPoly constant(const Rational& c) { return UniPoly({c}); }

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    Rational operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
    const Rational& leading() const { return c_.back(); }

    Rational operator()(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<unsigned long>(k);
        return UniPoly(std::move(d));
    }

    /// p(x + s), by binomial expansion.
    UniPoly shifted(const Rational& s) const {
        std::vector<Rational> out(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            Rational spow = 1;
            for (std::size_t i = 0; i <= k; ++i) {
                // term c_k·C(k,i)·s^i·x^{k-i}
                out[k - i] += c_[k] * Rational(binomial(k, i)) * spow;
                spow *= s;
            }
        }
        return UniPoly(std::move(out));
    }

    UniPoly monic() const {
        if (is_zero()) return {};
        return (1 / leading()) * *this;
    }

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

    friend UniPoly operator+(const UniPoly& p, const UniPoly& q) {
        std::vector<Rational> out(std::max(p.c_.size(), q.c_.size()));
        for (std::size_t k = 0; k < p.c_.size(); ++k) out[k] += p.c_[k];
        for (std::size_t k = 0; k < q.c_.size(); ++k) out[k] += q.c_[k];
        return UniPoly(std::move(out));
    }
    friend UniPoly operator-(const UniPoly& p) { return Rational(-1) * p; }
    friend UniPoly operator-(const UniPoly& p, const UniPoly& q) { return p + (-q); }
    friend UniPoly operator*(const Rational& s, const UniPoly& p) {
        if (s == 0) return {};
        std::vector<Rational> out = p.c_;
        for (auto& c : out) c *= s;
        return UniPoly(std::move(out));
    }
    friend UniPoly operator*(const UniPoly& p, const UniPoly& q) {
        if (p.is_zero() || q.is_zero()) return {};
        std::vector<Rational> out(p.c_.size() + q.c_.size() - 1);
        for (std::size_t i = 0; i < p.c_.size(); ++i) {
            if (p.c_[i] == 0) continue;
            for (std::size_t j = 0; j < q.c_.size(); ++j) out[i + j] += p.c_[i] * q.c_[j];
        }
        return UniPoly(std::move(out));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Quotient and remainder of p / d.
inline std::pair<UniPoly, UniPoly> divmod(const UniPoly& p, const UniPoly& d) {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = p.coeffs();
    const auto dd = static_cast<std::size_t>(d.degree());
    if (rem.size() <= dd) return {UniPoly{}, p};
    std::vector<Rational> quo(rem.size() - dd);
    const Rational inv = 1 / d.leading();
    for (std::size_t k = rem.size(); k-- > dd;) {
        if (rem[k] == 0) continue;
        Rational f = rem[k] * inv;
        quo[k - dd] = f;
        for (std::size_t i = 0; i <= dd; ++i) rem[k - dd + i] -= f * d[i];
    }
    return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

/// Monic gcd.
inline UniPoly gcd(UniPoly p, UniPoly q) {
    while (!q.is_zero()) {
        auto r = divmod(p, q).second;
        p = std::move(q);
        q = r.monic();
    }
    return p.monic();
}

/// Human-readable form in variable `var`, descending powers, e.g. "t^2 - 8".
inline std::string to_string(const UniPoly& p, const std::string& var = "x") {
    if (p.is_zero()) return "0";
    std::string out;
    for (std::size_t k = p.coeffs().size(); k-- > 0;) {
        const Rational& c = p.coeffs()[k];
        if (c == 0) continue;
        Rational mag = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
        if (k == 0) {
            out += mag.get_str();
        } else if (mag == 1) {
            out += mono;
        } else {
            out += mag.get_str() + "*" + mono;
        }
    }
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_UNIPOLY_HPP
