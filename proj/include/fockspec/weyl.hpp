#ifndef FOCKSPEC_WEYL_HPP
#define FOCKSPEC_WEYL_HPP

// Normal-ordered elements of the enveloping algebra of the Heisenberg algebra
// [a, b] = 1, and their action on the Fock basis b^k|0>.

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/matrix.hpp"
#include "fockspec/rational.hpp"

namespace fockspec {

inline constexpr std::size_t default_degree_cap = 64;

/// b^b_exp a^a_exp
struct Monomial {
    std::size_t b_exp = 0;
    std::size_t a_exp = 0;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Σ A_ij b^i a^j with all b's to the left. Zero coefficients are never stored, so
/// equality of two elements is equality of their term maps.
class WeylElement {
public:
    using Terms = std::map<Monomial, Rational>;

    WeylElement() = default;

    /// c·b^i a^j. Throws DegreeOverflow when either exponent exceeds the cap.
    static WeylElement make(const Rational& c, std::size_t i, std::size_t j,
                            std::size_t cap = default_degree_cap) {
        if (i > cap) throw DegreeOverflow(i, cap);
        if (j > cap) throw DegreeOverflow(j, cap);
        WeylElement out;
        if (c != 0) out.terms_.emplace(Monomial{i, j}, c);
        return out;
    }
    static WeylElement scalar(const Rational& c) { return make(c, 0, 0); }
    static WeylElement a() { return make(1, 0, 1); }
    static WeylElement b() { return make(1, 1, 0); }
    /// L0 = ba
    static WeylElement number() { return make(1, 1, 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(std::size_t i, std::size_t j) const {
        auto it = terms_.find(Monomial{i, j});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    std::size_t max_b_degree() const {
        std::size_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.b_exp);
        return d;
    }
    std::size_t max_a_degree() const {
        std::size_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.a_exp);
        return d;
    }

    /// Adds c·b^i a^j, pruning on cancellation.
    void accumulate(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend bool operator==(const WeylElement&, const WeylElement&) = default;

    friend WeylElement operator+(WeylElement u, const WeylElement& v) {
        for (const auto& [m, c] : v.terms_) u.accumulate(m, c);
        return u;
    }
    friend WeylElement operator-(const WeylElement& u) {
        WeylElement out = u;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    friend WeylElement operator-(WeylElement u, const WeylElement& v) {
        for (const auto& [m, c] : v.terms_) u.accumulate(m, -c);
        return u;
    }
    friend WeylElement operator*(const Rational& s, const WeylElement& u) {
        if (s == 0) return {};
        WeylElement out = u;
        for (auto& [m, c] : out.terms_) c *= s;
        return out;
    }

private:
    Terms terms_;
};

inline WeylElement add(const WeylElement& u, const WeylElement& v) { return u + v; }
inline WeylElement scale(const Rational& c, const WeylElement& u) { return c * u; }

/// Normal form of the noncommutative product u·v.
///
/// (b^p a^q)(b^r a^s) = Σ_k k!·C(q,k)·C(r,k)·b^{p+r-k} a^{q+s-k}, k = 0..min(q,r).
/// The k = 0 term carries the largest exponents, so checking it against the cap
/// covers every intermediate.
inline WeylElement multiply(const WeylElement& u, const WeylElement& v, std::size_t cap = default_degree_cap) {
    WeylElement out;
    for (const auto& [mu, cu] : u.terms()) {
        for (const auto& [mv, cv] : v.terms()) {
            const std::size_t b_top = mu.b_exp + mv.b_exp;
            const std::size_t a_top = mu.a_exp + mv.a_exp;
            if (b_top > cap) throw DegreeOverflow(b_top, cap);
            if (a_top > cap) throw DegreeOverflow(a_top, cap);
            const Rational c = cu * cv;
            const std::size_t kmax = std::min(mu.a_exp, mv.b_exp);
            for (std::size_t k = 0; k <= kmax; ++k) {
                Integer w = factorial(k) * binomial(mu.a_exp, k) * binomial(mv.b_exp, k);
                out.accumulate(Monomial{b_top - k, a_top - k}, c * Rational(w));
            }
        }
    }
    return out;
}

inline WeylElement commutator(const WeylElement& u, const WeylElement& v, std::size_t cap = default_degree_cap) {
    return multiply(u, v, cap) - multiply(v, u, cap);
}

/// u^e by repeated squaring.
inline WeylElement power(const WeylElement& u, std::size_t e, std::size_t cap = default_degree_cap) {
    WeylElement result = WeylElement::scalar(1);
    WeylElement base = u;
    while (e > 0) {
        if (e & 1u) result = multiply(result, base, cap);
        e >>= 1u;
        if (e > 0) base = multiply(base, base, cap);
    }
    return result;
}

/// Σ coeffs[k]·b^k|0>, trailing zeros trimmed.
class FockVector {
public:
    FockVector() = default;
    explicit FockVector(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static FockVector basis(std::size_t k) {
        std::vector<Rational> c(k + 1);
        c[k] = 1;
        return FockVector(std::move(c));
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Highest degree present; meaningless for the zero vector.
    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    Rational operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

    void add(std::size_t k, const Rational& c) {
        if (c == 0) return;
        if (k >= coeffs_.size()) coeffs_.resize(k + 1);
        coeffs_[k] += c;
        trim();
    }

    friend bool operator==(const FockVector&, const FockVector&) = default;

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

/// Image of b^k|0> under u, via a·b^k|0> = k·b^{k-1}|0> applied termwise.
inline FockVector fock_apply(const WeylElement& u, std::size_t k) {
    std::vector<Rational> out;
    for (const auto& [m, c] : u.terms()) {
        if (m.a_exp > k) continue;
        const std::size_t deg = k - m.a_exp + m.b_exp;
        if (deg >= out.size()) out.resize(deg + 1);
        out[deg] += c * Rational(falling_factorial(k, m.a_exp));
    }
    return FockVector(std::move(out));
}

/// Action of u on an arbitrary Fock vector.
inline FockVector fock_apply(const WeylElement& u, const FockVector& v) {
    std::vector<Rational> out;
    for (std::size_t k = 0; k < v.coeffs().size(); ++k) {
        if (v[k] == 0) continue;
        FockVector col = fock_apply(u, k);
        if (col.coeffs().size() > out.size()) out.resize(col.coeffs().size());
        for (std::size_t d = 0; d < col.coeffs().size(); ++d) out[d] += v[k] * col[d];
    }
    return FockVector(std::move(out));
}

/// Matrix of an operator on a truncated polynomial-like basis {e_0..e_N}: column k is
/// the image of e_k. Components of degree > N are recorded per column in `leakage`
/// (indexed by absolute degree, entries <= N zero).
struct FlagMatrix {
    RationalMatrix entries;
    std::map<std::size_t, FockVector> leakage;

    std::size_t size() const { return entries.rows(); }
    bool invariant() const { return leakage.empty(); }
    /// True when columns 0..n carry no leakage.
    bool invariant_through(std::size_t n) const {
        return leakage.empty() || leakage.begin()->first > n;
    }
};

/// Splits column images into the in-range block and per-column leakage.
inline FlagMatrix assemble_flag(std::size_t n_max, std::span<const FockVector> columns) {
    FlagMatrix fm{RationalMatrix(n_max + 1, n_max + 1), {}};
    for (std::size_t k = 0; k <= n_max; ++k) {
        const auto& col = columns[k];
        std::vector<Rational> over;
        for (std::size_t d = 0; d < col.coeffs().size(); ++d) {
            if (d <= n_max) {
                fm.entries(d, k) = col[d];
            } else {
                if (over.empty()) over.resize(col.coeffs().size());
                over[d] = col[d];
            }
        }
        FockVector leak(std::move(over));
        if (!leak.is_zero()) fm.leakage.emplace(k, std::move(leak));
    }
    return fm;
}

inline FlagMatrix flag_matrix(const WeylElement& u, std::size_t n_max, std::size_t cap = default_degree_cap) {
    if (n_max > cap) throw DegreeOverflow(n_max, cap);
    std::vector<FockVector> cols;
    cols.reserve(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k) cols.push_back(fock_apply(u, k));
    return assemble_flag(n_max, cols);
}

/// P(L0) = Σ c_j (ba)^j; coefficients are in ascending powers.
inline WeylElement eval_poly_in_L0(std::span<const Rational> coeffs, std::size_t cap = default_degree_cap) {
    WeylElement out;
    WeylElement l0_power = WeylElement::scalar(1);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (j > 0) l0_power = multiply(l0_power, WeylElement::number(), cap);
        out = out + coeffs[j] * l0_power;
    }
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_WEYL_HPP
