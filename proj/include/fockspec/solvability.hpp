#ifndef FOCKSPEC_SOLVABILITY_HPP
#define FOCKSPEC_SOLVABILITY_HPP

// Exact- and quasi-exact-solvability. Invariance of span{b^0..b^n}|0> is always
// decided by direct leakage testing; the closed-form constraints are evaluated
// alongside and compared against it, never trusted in its place.

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec {

inline constexpr std::size_t default_scan_bound = 32;

/// True iff every term b^i a^j has i <= j, i.e. u never raises the degree.
inline bool is_exactly_solvable(const WeylElement& u) {
    for (const auto& [m, c] : u.terms())
        if (m.b_exp > m.a_exp) return false;
    return true;
}

/// Eigenvalue of an exactly-solvable u on the degree-k sector: Σ_j A_jj·k(k-1)...(k-j+1).
inline Rational es_diagonal(const WeylElement& u, std::size_t k) {
    if (!is_exactly_solvable(u)) throw NotExactlySolvable();
    Rational out = 0;
    for (const auto& [m, c] : u.terms())
        if (m.b_exp == m.a_exp) out += c * Rational(falling_factorial(k, m.a_exp));
    return out;
}

/// Q4(b) a^2 + Q3(b) a + Q2(b) with
/// Q4 = a4 b^4 + ... + a0, Q3 = b3 b^3 + ... + b0, Q2 = d2 b^2 + d1 b + d0.
struct QESCoeffs {
    Rational a4, a3, a2, a1, a0;
    Rational b3, b2, b1, b0;
    Rational d2, d1, d0;

    bool heun_form() const { return a4 == 0 && b3 == 0 && d2 == 0; }

    WeylElement element() const {
        WeylElement u;
        const Rational* q4[] = {&a0, &a1, &a2, &a3, &a4};
        const Rational* q3[] = {&b0, &b1, &b2, &b3};
        const Rational* q2[] = {&d0, &d1, &d2};
        for (std::size_t i = 0; i < 5; ++i) u.accumulate({i, 2}, *q4[i]);
        for (std::size_t i = 0; i < 4; ++i) u.accumulate({i, 1}, *q3[i]);
        for (std::size_t i = 0; i < 3; ++i) u.accumulate({i, 0}, *q2[i]);
        return u;
    }

    /// Reads the coefficients back from a normal form; nullopt if u is not of this shape.
    static std::optional<QESCoeffs> from_element(const WeylElement& u) {
        QESCoeffs c;
        Rational* slots[3][5] = {{&c.d0, &c.d1, &c.d2, nullptr, nullptr},
                                 {&c.b0, &c.b1, &c.b2, &c.b3, nullptr},
                                 {&c.a0, &c.a1, &c.a2, &c.a3, &c.a4}};
        for (const auto& [m, v] : u.terms()) {
            if (m.a_exp > 2 || m.b_exp > 4) return std::nullopt;
            Rational* slot = slots[m.a_exp][m.b_exp];
            if (slot == nullptr) return std::nullopt;
            *slot = v;
        }
        return c;
    }
};

/// Left-hand sides of the two published QES constraints:
///   r1 = a4 n(n-1) + b3 n + d2
///   r2 = a4 (n-1)(n-2) + b3 (n-1) + d2 + a3 n(n-1) + b2 n + d1
inline std::pair<Rational, Rational> qes_constraint_residuals(const QESCoeffs& c, long n) {
    const Rational nn(n);
    Rational r1 = c.a4 * nn * (nn - 1) + c.b3 * nn + c.d2;
    Rational r2 = c.a4 * (nn - 1) * (nn - 2) + c.b3 * (nn - 1) + c.d2 + c.a3 * nn * (nn - 1) + c.b2 * nn + c.d1;
    return {r1, r2};
}

/// a3 n(n-1) + b2 n + d1
inline Rational heun_constraint_residual(const Rational& a3, const Rational& b2, const Rational& d1, long n) {
    const Rational nn(n);
    return a3 * nn * (nn - 1) + b2 * nn + d1;
}

/// Leakage conditions of span{b^0..b^n}|0> for Q4 a^2 + Q3 a + Q2, read off the Fock action.
/// Column k gains degree k+2 with coefficient a4 k(k-1) + b3 k + d2, and degree k+1 with
/// a3 k(k-1) + b2 k + d1. Only columns n (both) and n-1 (the +2 part) can escape.
struct QesLeakageConditions {
    Rational raise2_at_n;                     // a4 n(n-1) + b3 n + d2
    std::optional<Rational> raise2_at_prev;   // a4 (n-1)(n-2) + b3 (n-1) + d2, absent for n = 0
    Rational raise1_at_n;                     // a3 n(n-1) + b2 n + d1

    bool satisfied() const {
        return raise2_at_n == 0 && raise1_at_n == 0 && (!raise2_at_prev || *raise2_at_prev == 0);
    }
};

inline QesLeakageConditions qes_leakage_conditions(const QESCoeffs& c, std::size_t n) {
    auto raise2 = [&](std::size_t k) -> Rational {
        const Rational kk(static_cast<unsigned long>(k));
        return c.a4 * kk * (kk - 1) + c.b3 * kk + c.d2;
    };
    QesLeakageConditions out;
    out.raise2_at_n = raise2(n);
    if (n > 0) out.raise2_at_prev = raise2(n - 1);
    out.raise1_at_n = heun_constraint_residual(c.a3, c.b2, c.d1, static_cast<long>(n));
    return out;
}

/// All n <= n_max for which span{b^0..b^n}|0> is invariant under u.
inline std::vector<std::size_t> invariant_degree_scan(const WeylElement& u, std::size_t n_max = default_scan_bound,
                                                      std::size_t cap = default_degree_cap) {
    if (n_max > cap) throw DegreeOverflow(n_max, cap);
    std::vector<std::size_t> out;
    std::size_t reach = 0;  // max degree hit by columns 0..n
    for (std::size_t n = 0; n <= n_max; ++n) {
        FockVector col = fock_apply(u, n);
        if (!col.is_zero()) reach = std::max(reach, col.degree());
        if (reach <= n) out.push_back(n);
    }
    return out;
}

struct LeakageWitness {
    std::size_t degree;  // the non-invariant n
    std::size_t column;
    FockVector overflow;
};

struct ConstraintResiduals {
    std::optional<std::pair<Rational, Rational>> qes;  // general QES shape
    std::optional<Rational> heun;                      // Heun shape (a4 = b3 = d2 = 0)
};

struct SolvabilityReport {
    bool exactly_solvable = false;
    std::size_t scan_bound = 0;
    std::vector<std::size_t> invariant_degrees;
    /// Residuals evaluated at each invariant degree, when u has the QES shape and is not ES.
    std::map<std::size_t, ConstraintResiduals> constraint_residuals;
    /// First leaking column at the smallest non-invariant degree.
    std::optional<LeakageWitness> leakage_witness;
};

inline SolvabilityReport classify(const WeylElement& u, std::size_t n_max = default_scan_bound,
                                  std::size_t cap = default_degree_cap) {
    SolvabilityReport rep;
    rep.exactly_solvable = is_exactly_solvable(u);
    rep.scan_bound = n_max;
    rep.invariant_degrees = invariant_degree_scan(u, n_max, cap);

    if (!rep.exactly_solvable) {
        if (auto qc = QESCoeffs::from_element(u)) {
            for (auto n : rep.invariant_degrees) {
                ConstraintResiduals cr;
                if (qc->heun_form())
                    cr.heun = heun_constraint_residual(qc->a3, qc->b2, qc->d1, static_cast<long>(n));
                else
                    cr.qes = qes_constraint_residuals(*qc, static_cast<long>(n));
                rep.constraint_residuals.emplace(n, std::move(cr));
            }
        }
    }

    std::size_t expected = 0;
    for (auto n : rep.invariant_degrees) {
        if (n != expected) break;
        ++expected;
    }
    if (expected <= n_max) {
        FlagMatrix fm = flag_matrix(u, expected, cap);
        const auto& [col, overflow] = *fm.leakage.begin();
        rep.leakage_witness = LeakageWitness{expected, col, overflow};
    }
    return rep;
}

}  // namespace fockspec

#endif  // FOCKSPEC_SOLVABILITY_HPP
