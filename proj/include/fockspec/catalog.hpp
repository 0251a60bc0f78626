#ifndef FOCKSPEC_CATALOG_HPP
#define FOCKSPEC_CATALOG_HPP

// Named operators. Parameter names differ from the usual literature symbols where those
// would collide with other objects here:
//   Lamé    λ, δ  ->  m, d      (eigenvalues, lattice spacing)
//   sextic  a, b  ->  alpha, beta  (the generators)
// Degrees are counted from 0: the sector span{b^0..b^n}|0> has dimension n + 1.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/solvability.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec {

enum class Family { ES, QES, Other };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::ES: return "ES";
        case Family::QES: return "QES";
        case Family::Other: return "Other";
    }
    return "";
}

struct OpSpec {
    std::string name;
    WeylElement element;
    Bindings params;
    std::optional<std::size_t> invariant_degree;
    Family family = Family::Other;
};

namespace detail {
inline WeylElement term(const Rational& c, std::size_t i, std::size_t j) { return WeylElement::make(c, i, j); }
inline Rational nat(std::size_t n) { return Rational(static_cast<unsigned long>(n)); }
}  // namespace detail

/// L0 = ba
inline OpSpec number() { return {"number", WeylElement::number(), {}, std::nullopt, Family::ES}; }

/// -a^2 + ba
inline OpSpec hermite() {
    using detail::term;
    return {"hermite", term(-1, 0, 2) + term(1, 1, 1), {}, std::nullopt, Family::ES};
}

/// -b a^2 + (b - α - 1) a
inline OpSpec laguerre(const Rational& alpha) {
    using detail::term;
    WeylElement u = term(-1, 1, 2) + term(1, 1, 1) + term(-alpha - 1, 0, 1);
    return {"laguerre", u, {{"alpha", alpha}}, std::nullopt, Family::ES};
}

/// Q̂3(b) a^2 + Q̂2(b) a + Q̂1(b): the QES shape with a4 = b3 = d2 = 0.
/// Throws ConstraintViolation unless a3 n(n-1) + b2 n + d1 = 0.
inline OpSpec heun(const QESCoeffs& c, std::size_t n) {
    if (!c.heun_form()) throw std::invalid_argument("heun: a4, b3 and d2 must vanish");
    Rational r = heun_constraint_residual(c.a3, c.b2, c.d1, static_cast<long>(n));
    if (r != 0) throw ConstraintViolation(r);
    Bindings p{{"a3", c.a3}, {"a2", c.a2}, {"a1", c.a1}, {"a0", c.a0}, {"b2", c.b2}, {"b1", c.b1},
               {"b0", c.b0}, {"d1", c.d1}, {"d0", c.d0}, {"n", detail::nat(n)}};
    return {"heun", c.element(), std::move(p), n, Family::QES};
}

/// 4(b^3 - 3m b^2 + 3d b) a^2 + 6(b^2 - 2m b + d) a - 2n(2n+1)(b - m)
inline OpSpec lame(const Rational& m, const Rational& d, std::size_t n) {
    using detail::term;
    const Rational nn = detail::nat(n);
    const Rational k = 2 * nn * (2 * nn + 1);
    WeylElement u = term(4, 3, 2) + term(-12 * m, 2, 2) + term(12 * d, 1, 2)   //
                    + term(6, 2, 1) + term(-12 * m, 1, 1) + term(6 * d, 0, 1)  //
                    + term(-k, 1, 0) + term(k * m, 0, 0);
    return {"lame", u, {{"m", m}, {"d", d}, {"n", nn}}, n, Family::QES};
}

/// Weierstrass invariants (g2, g3) = (12(m^2 - d), 4m(2m^2 - 3d)) of the Lamé parameters.
inline std::pair<Rational, Rational> elliptic_invariants(const Rational& m, const Rational& d) {
    return {12 * (m * m - d), 4 * m * (2 * m * m - 3 * d)};
}

/// -4 b a^2 + 2(2α b^2 + 2β b - 1) a - 4α n b
inline OpSpec sextic(const Rational& alpha, const Rational& beta, std::size_t n) {
    using detail::term;
    const Rational nn = detail::nat(n);
    WeylElement u = term(-4, 1, 2) + term(4 * alpha, 2, 1) + term(4 * beta, 1, 1) + term(-2, 0, 1) +
                    term(-4 * alpha * nn, 1, 0);
    return {"sextic", u, {{"alpha", alpha}, {"beta", beta}, {"n", nn}}, n, Family::QES};
}

/// Potential c6 τ^6 + c4 τ^4 + c2 τ^2 + c0 of the Schrödinger operator gauge-equivalent
/// to sextic(α, β, n) under x = τ^2.
struct SexticPotential {
    Rational c6, c4, c2, c0;
    friend bool operator==(const SexticPotential&, const SexticPotential&) = default;
};

inline SexticPotential sextic_hamiltonian_coeffs(const Rational& alpha, const Rational& beta, std::size_t n) {
    const Rational nn = detail::nat(n);
    return {alpha * alpha, 2 * alpha * beta, beta * beta - (4 * nn + 3) * alpha, -beta};
}

/// sl(2) generators: J+ = b^2 a - k b, J0 = ba - k/2, J- = a.
inline OpSpec jplus(const Rational& k) {
    return {"jplus", detail::term(1, 2, 1) + detail::term(-k, 1, 0), {{"k", k}}, std::nullopt, Family::Other};
}
inline OpSpec jzero(const Rational& k) {
    return {"jzero", detail::term(1, 1, 1) + detail::term(-k / 2, 0, 0), {{"k", k}}, std::nullopt, Family::ES};
}
inline OpSpec jminus() { return {"jminus", WeylElement::a(), {}, std::nullopt, Family::ES}; }

/// J+ written as b (L0 - k), built by multiplication rather than by hand.
inline WeylElement jplus_via_number(const Rational& k) {
    return multiply(WeylElement::b(), WeylElement::number() - WeylElement::scalar(k));
}

/// J0^2 - (J+ J- + J- J+)/2
inline WeylElement casimir(const Rational& k) {
    const WeylElement jp = jplus(k).element, j0 = jzero(k).element, jm = jminus().element;
    return multiply(j0, j0) - Rational(1, 2) * (multiply(jp, jm) + multiply(jm, jp));
}

// ---------------------------------------------------------------------------
// Registry used by the CLI.

struct ParamSchema {
    std::string name;
    bool nonneg_integer = false;
    std::optional<Rational> default_value;
    std::string description;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    Family family;
    std::vector<ParamSchema> params;
    std::function<OpSpec(const Bindings&)> build;
};

namespace detail {

inline Rational bound_param(const Bindings& b, const ParamSchema& p) {
    auto it = b.find(p.name);
    if (it == b.end()) {
        if (p.default_value) return *p.default_value;
        throw UnboundParameter(p.name);
    }
    if (p.nonneg_integer && (!is_integer(it->second) || it->second < 0))
        throw BindingError("parameter '" + p.name + "' must be a non-negative integer, got " + to_string(it->second));
    return it->second;
}

inline std::size_t as_size(const Rational& r) { return static_cast<std::size_t>(r.get_num().get_ui()); }

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        using detail::as_size;
        using detail::bound_param;
        const ParamSchema n_param{"n", true, std::nullopt, "invariant degree"};
        std::vector<CatalogEntry> e;
        e.push_back({"number", "number operator L0 = ba", Family::ES, {}, [](const Bindings&) { return number(); }});
        e.push_back({"hermite", "Hermite operator -a^2 + ba", Family::ES, {}, [](const Bindings&) { return hermite(); }});
        {
            std::vector<ParamSchema> ps{{"alpha", false, std::nullopt, "Laguerre index"}};
            e.push_back({"laguerre", "Laguerre operator -b a^2 + (b - alpha - 1) a", Family::ES, ps, [ps](const Bindings& b) {
                             return laguerre(bound_param(b, ps[0]));
                         }});
        }
        {
            std::vector<ParamSchema> ps{{"a3", false, std::nullopt, "b^3 a^2"},
                                        {"a2", false, std::nullopt, "b^2 a^2"},
                                        {"a1", false, std::nullopt, "b a^2"},
                                        {"a0", false, Rational(0), "a^2"},
                                        {"b2", false, std::nullopt, "b^2 a"},
                                        {"b1", false, std::nullopt, "b a"},
                                        {"b0", false, std::nullopt, "a"},
                                        {"d1", false, std::nullopt, "b"},
                                        {"d0", false, Rational(0), "1"},
                                        n_param};
            e.push_back({"heun", "Heun operator (a3 b^3 + a2 b^2 + a1 b + a0) a^2 + (b2 b^2 + b1 b + b0) a + d1 b + d0", Family::QES,
                         ps, [ps](const Bindings& b) {
                             QESCoeffs c;
                             c.a3 = bound_param(b, ps[0]);
                             c.a2 = bound_param(b, ps[1]);
                             c.a1 = bound_param(b, ps[2]);
                             c.a0 = bound_param(b, ps[3]);
                             c.b2 = bound_param(b, ps[4]);
                             c.b1 = bound_param(b, ps[5]);
                             c.b0 = bound_param(b, ps[6]);
                             c.d1 = bound_param(b, ps[7]);
                             c.d0 = bound_param(b, ps[8]);
                             return heun(c, as_size(bound_param(b, ps[9])));
                         }});
        }
        {
            std::vector<ParamSchema> ps{{"m", false, std::nullopt, "Lame parameter (lambda)"},
                                        {"d", false, std::nullopt, "Lame parameter (delta)"},
                                        n_param};
            e.push_back({"lame", "Lame operator 4(b^3 - 3m b^2 + 3d b) a^2 + 6(b^2 - 2m b + d) a - 2n(2n+1)(b - m)", Family::QES, ps, [ps](const Bindings& b) {
                             return lame(bound_param(b, ps[0]), bound_param(b, ps[1]), as_size(bound_param(b, ps[2])));
                         }});
        }
        {
            std::vector<ParamSchema> ps{{"alpha", false, std::nullopt, "tau^6 strength (a)"},
                                        {"beta", false, std::nullopt, "tau^4 strength (b)"},
                                        n_param};
            e.push_back({"sextic", "sextic QES operator -4 b a^2 + 2(2 alpha b^2 + 2 beta b - 1) a - 4 alpha n b", Family::QES, ps,
                         [ps](const Bindings& b) {
                             return sextic(bound_param(b, ps[0]), bound_param(b, ps[1]),
                                           as_size(bound_param(b, ps[2])));
                         }});
        }
        {
            std::vector<ParamSchema> ps{{"k", false, std::nullopt, "representation parameter"}};
            e.push_back({"jplus", "sl(2) raising generator b^2 a - k b", Family::Other, ps,
                         [ps](const Bindings& b) { return jplus(bound_param(b, ps[0])); }});
            e.push_back({"jzero", "sl(2) Cartan generator ba - k/2", Family::ES, ps,
                         [ps](const Bindings& b) { return jzero(bound_param(b, ps[0])); }});
        }
        e.push_back({"jminus", "sl(2) lowering generator a", Family::ES, {}, [](const Bindings&) { return jminus(); }});
        return e;
    }();
    return entries;
}

/// Looks up `name` and builds it from `binds`. Throws std::out_of_range for unknown names.
inline OpSpec build_operator(const std::string& name, const Bindings& binds) {
    for (const auto& entry : catalog())
        if (entry.name == name) return entry.build(binds);
    throw std::out_of_range("unknown operator '" + name + "'");
}

}  // namespace fockspec

#endif  // FOCKSPEC_CATALOG_HPP
