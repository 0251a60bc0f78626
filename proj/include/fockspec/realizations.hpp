#ifndef FOCKSPEC_REALIZATIONS_HPP
#define FOCKSPEC_REALIZATIONS_HPP

// Concrete representations of the Heisenberg algebra on polynomial spaces:
//   Differential   a = d/dx,                 b = x
//   DeltaLattice   a f = (f(x+δ) - f(x))/δ,  b f = x f(x-δ)
//   QLattice       a x^n = {n}_q x^{n-1},    b x^n = (n+1)/{n+1}_q x^{n+1}
//   ComplexPlane   a = ∂/∂z̄,                 b = -∂/∂z + z̄   (on polynomials in z, z̄)
// Univariate matrices are always in the monomial basis {x^0..x^N}.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/matrix.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/unipoly.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec {

class RealizationId {
public:
    enum class Kind { Differential, DeltaLattice, QLattice, ComplexPlane };

    static RealizationId differential() { return RealizationId(Kind::Differential, 0); }
    static RealizationId delta_lattice(const Rational& delta) {
        if (delta == 0) throw std::invalid_argument("delta lattice spacing must be nonzero");
        return RealizationId(Kind::DeltaLattice, delta);
    }
    /// q = 0 and q = 1 are degenerate; q = -1 makes {2}_q vanish, so b_q is undefined.
    static RealizationId q_lattice(const Rational& q) {
        if (q == 0 || q == 1 || q == -1) throw std::invalid_argument("q-lattice parameter must not be 0, 1 or -1");
        return RealizationId(Kind::QLattice, q);
    }
    static RealizationId complex_plane() { return RealizationId(Kind::ComplexPlane, 0); }

    Kind kind() const { return kind_; }
    /// δ or q; zero for the parameterless kinds.
    const Rational& parameter() const { return param_; }
    bool univariate() const { return kind_ != Kind::ComplexPlane; }

    std::string label() const {
        switch (kind_) {
            case Kind::Differential: return "differential";
            case Kind::DeltaLattice: return "delta:" + to_string(param_);
            case Kind::QLattice: return "q:" + to_string(param_);
            case Kind::ComplexPlane: return "complex";
        }
        return {};
    }

    friend bool operator==(const RealizationId&, const RealizationId&) = default;

private:
    RealizationId(Kind k, Rational p) : kind_(k), param_(std::move(p)) {}
    Kind kind_;
    Rational param_;
};

/// {n}_q = q^{n-1} + ... + q + 1, summed by Horner so q < 0 needs no division.
inline Rational q_number(std::size_t n, const Rational& q) {
    Rational acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc = acc * q + 1;
    return acc;
}

inline UniPoly act_a(const RealizationId& r, const UniPoly& p) {
    switch (r.kind()) {
        case RealizationId::Kind::Differential:
            return p.derivative();
        case RealizationId::Kind::DeltaLattice:
            return (1 / r.parameter()) * (p.shifted(r.parameter()) - p);
        case RealizationId::Kind::QLattice: {
            if (p.coeffs().size() <= 1) return {};
            std::vector<Rational> out(p.coeffs().size() - 1);
            for (std::size_t n = 1; n < p.coeffs().size(); ++n) out[n - 1] = p[n] * q_number(n, r.parameter());
            return UniPoly(std::move(out));
        }
        case RealizationId::Kind::ComplexPlane:
            break;
    }
    throw std::invalid_argument("act_a: complex plane acts on BiPoly, not UniPoly");
}

inline UniPoly act_b(const RealizationId& r, const UniPoly& p) {
    switch (r.kind()) {
        case RealizationId::Kind::Differential:
            return UniPoly::monomial(1) * p;
        case RealizationId::Kind::DeltaLattice:
            return UniPoly::monomial(1) * p.shifted(-r.parameter());
        case RealizationId::Kind::QLattice: {
            if (p.is_zero()) return {};
            std::vector<Rational> out(p.coeffs().size() + 1);
            for (std::size_t n = 0; n < p.coeffs().size(); ++n)
                out[n + 1] = p[n] * Rational(static_cast<unsigned long>(n + 1)) / q_number(n + 1, r.parameter());
            return UniPoly(std::move(out));
        }
        case RealizationId::Kind::ComplexPlane:
            break;
    }
    throw std::invalid_argument("act_b: complex plane acts on BiPoly, not UniPoly");
}

/// Realized action of u on a polynomial. Inside each term b^i a^j the a-actions are
/// applied first.
inline UniPoly realize_apply(const WeylElement& u, const RealizationId& r, const UniPoly& p) {
    std::vector<UniPoly> a_powers{p};  // a^j p, filled on demand
    UniPoly out;
    for (const auto& [m, c] : u.terms()) {
        while (a_powers.size() <= m.a_exp) a_powers.push_back(act_a(r, a_powers.back()));
        UniPoly term = a_powers[m.a_exp];
        for (std::size_t i = 0; i < m.b_exp && !term.is_zero(); ++i) term = act_b(r, term);
        out = out + c * term;
    }
    return out;
}

inline FlagMatrix realize_matrix(const WeylElement& u, const RealizationId& r, std::size_t n_max) {
    if (!r.univariate()) throw std::invalid_argument("realize_matrix: use complex_fiber_matrix for the complex plane");
    std::vector<FockVector> cols;
    cols.reserve(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k)
        cols.emplace_back(realize_apply(u, r, UniPoly::monomial(k)).coeffs());
    return assemble_flag(n_max, cols);
}

/// Column k holds the monomial coefficients of x(x-δ)...(x-(k-1)δ), the image of b^k|0>
/// in the δ-lattice realization.
inline RationalMatrix quasi_monomial_change(const Rational& delta, std::size_t n_max) {
    if (delta == 0) throw std::invalid_argument("delta lattice spacing must be nonzero");
    RationalMatrix m(n_max + 1, n_max + 1);
    UniPoly qm = UniPoly::constant(1);
    for (std::size_t k = 0; k <= n_max; ++k) {
        for (std::size_t d = 0; d <= k; ++d) m(d, k) = qm[d];
        qm = qm * UniPoly{-Rational(static_cast<unsigned long>(k)) * delta, 1};
    }
    return m;
}

/// Polynomial in (z, z̄): terms keyed by (z exponent, z̄ exponent).
class BiPoly {
public:
    using Key = std::pair<std::size_t, std::size_t>;
    using Terms = std::map<Key, Rational>;

    BiPoly() = default;
    static BiPoly monomial(std::size_t p, std::size_t q, const Rational& c = 1) {
        BiPoly out;
        out.add(p, q, c);
        return out;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(std::size_t p, std::size_t q) const {
        auto it = terms_.find({p, q});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    /// Largest z̄ exponent; 0 for the zero polynomial.
    std::size_t zbar_degree() const {
        std::size_t d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    void add(std::size_t p, std::size_t q, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(Key{p, q}, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend bool operator==(const BiPoly&, const BiPoly&) = default;
    friend BiPoly operator+(BiPoly f, const BiPoly& g) {
        for (const auto& [k, c] : g.terms_) f.add(k.first, k.second, c);
        return f;
    }
    friend BiPoly operator*(const Rational& s, const BiPoly& f) {
        BiPoly out;
        for (const auto& [k, c] : f.terms_) out.add(k.first, k.second, s * c);
        return out;
    }
    friend BiPoly operator-(BiPoly f, const BiPoly& g) { return f + Rational(-1) * g; }

private:
    Terms terms_;
};

/// a = ∂/∂z̄
inline BiPoly complex_act_a(const BiPoly& f) {
    BiPoly out;
    for (const auto& [k, c] : f.terms())
        if (k.second > 0) out.add(k.first, k.second - 1, c * static_cast<unsigned long>(k.second));
    return out;
}

/// b = -∂/∂z + z̄
inline BiPoly complex_act_b(const BiPoly& f) {
    BiPoly out;
    for (const auto& [k, c] : f.terms()) {
        if (k.first > 0) out.add(k.first - 1, k.second, -c * static_cast<unsigned long>(k.first));
        out.add(k.first, k.second + 1, c);
    }
    return out;
}

inline BiPoly complex_apply(const WeylElement& u, const BiPoly& f) {
    std::vector<BiPoly> a_powers{f};
    BiPoly out;
    for (const auto& [m, c] : u.terms()) {
        while (a_powers.size() <= m.a_exp) a_powers.push_back(complex_act_a(a_powers.back()));
        BiPoly term = a_powers[m.a_exp];
        for (std::size_t i = 0; i < m.b_exp && !term.is_zero(); ++i) term = complex_act_b(term);
        out = out + c * term;
    }
    return out;
}

namespace detail {

/// Fiber basis e_k = b^k z^m, generated on demand.
class FiberBasis {
public:
    explicit FiberBasis(std::size_t m) : m_(m) { basis_.push_back(BiPoly::monomial(m, 0)); }

    const BiPoly& operator[](std::size_t k) {
        while (basis_.size() <= k) basis_.push_back(complex_act_b(basis_.back()));
        return basis_[k];
    }

    /// Coordinates of f in {e_k}. The z̄^k part of e_k is exactly z^m z̄^k, so
    /// elimination from the top z̄ degree down is a triangular solve; anything left
    /// over means f is outside the span.
    FockVector coordinates(BiPoly f) {
        FockVector coords;
        while (!f.is_zero()) {
            const std::size_t q = f.zbar_degree();
            const Rational c = f.coefficient(m_, q);
            if (c == 0) throw SingularBasis("component outside span{b^k z^m} at zbar degree " + std::to_string(q));
            f = f - c * (*this)[q];
            if (f.zbar_degree() == q && !f.is_zero()) {
                for (const auto& [key, v] : f.terms())
                    if (key.second == q) throw SingularBasis("fiber basis top term mismatch");
            }
            coords.add(q, c);
        }
        return coords;
    }

private:
    std::size_t m_;
    std::vector<BiPoly> basis_;
};

}  // namespace detail

/// Matrix of u on the fiber basis {b^k z^m : 0 <= k <= n}, by exact solve in BiPoly
/// coordinates. Leakage records coordinates along e_k for k > n.
inline FlagMatrix complex_fiber_matrix(const WeylElement& u, std::size_t m, std::size_t n) {
    detail::FiberBasis basis(m);
    for (std::size_t k = 0; k <= n; ++k) {
        // e_0..e_n must have distinct top terms z^m z̄^k.
        if (basis[k].coefficient(m, k) != 1) throw SingularBasis("fiber basis is not triangular");
    }
    std::vector<FockVector> cols;
    cols.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) cols.push_back(basis.coordinates(complex_apply(u, basis[k])));
    return assemble_flag(n, cols);
}

}  // namespace fockspec

#endif  // FOCKSPEC_REALIZATIONS_HPP
