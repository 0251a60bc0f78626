#include <gtest/gtest.h>

#include <cmath>

#include "fockspec/catalog.hpp"
#include "fockspec/realizations.hpp"
#include "fockspec/solvability.hpp"
#include "fockspec/spectra.hpp"
#include "support.hpp"

using namespace fockspec;
using fockspec::oracle::Rng;

namespace {

WeylElement scalar_of(const Rational& c) { return WeylElement::scalar(c); }

std::vector<double> real_values(const Spectrum& s) {
    std::vector<double> out;
    for (const auto& e : s.eigenvalues) {
        EXPECT_NEAR(e.im, 0, 1e-14);
        out.push_back(e.value().real());
    }
    return out;
}

// Landau Hamiltonian -∂z ∂z̄ + z̄ ∂z̄ applied termwise to z^p z̄^q.
BiPoly landau(const BiPoly& f) {
    BiPoly out;
    for (const auto& [k, c] : f.terms()) {
        const auto [p, q] = k;
        if (p > 0 && q > 0) out.add(p - 1, q - 1, -c * static_cast<unsigned long>(p * q));
        if (q > 0) out.add(p, q, c * static_cast<unsigned long>(q));
    }
    return out;
}

}  // namespace

TEST(Catalog, NumberOperator) {
    FlagMatrix fm = flag_matrix(number().element, 7);
    EXPECT_TRUE(fm.invariant());
    EXPECT_EQ(fm.entries, oracle::diagonal(oracle::ints({0, 1, 2, 3, 4, 5, 6, 7})));

    BiPoly f;
    f.add(3, 2, rat(2, 3));
    f.add(0, 4, -1);
    f.add(1, 1, 5);
    f.add(2, 0, 7);
    EXPECT_EQ(complex_apply(number().element, f), landau(f));
    for (std::size_t m = 0; m <= 3; ++m)
        EXPECT_EQ(complex_fiber_matrix(number().element, m, 5).entries, oracle::diagonal(oracle::ints({0, 1, 2, 3, 4, 5})));
}

TEST(Catalog, HermiteAndLaguerre) {
    EXPECT_TRUE(is_exactly_solvable(hermite().element));
    EXPECT_TRUE(is_exactly_solvable(laguerre(rat(3, 2)).element));
    for (std::size_t k = 0; k <= 10; ++k) {
        EXPECT_EQ(es_diagonal(hermite().element, k), Rational(static_cast<unsigned long>(k)));
        EXPECT_EQ(es_diagonal(laguerre(rat(3, 2)).element, k), Rational(static_cast<unsigned long>(k)));
    }
    auto v = eigenvectors(restrict(hermite().element, RealizationId::differential(), 3), 3);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], oracle::ints({0, -3, 0, 1}));
    EXPECT_EQ(laguerre(rat(3, 2)).params.at("alpha"), rat(3, 2));
    EXPECT_EQ(hermite().family, Family::ES);
}

TEST(Catalog, HarmonicOscillatorShift) {
    const WeylElement h = number().element + scalar_of(rat(1, 2));
    Spectrum s = spectrum(h, RealizationId::q_lattice(3), 4);
    std::vector<Rational> expected{rat(1, 2), rat(3, 2), rat(5, 2), rat(7, 2), rat(9, 2)};
    std::vector<Rational> got;
    for (const auto& e : s.eigenvalues) got.push_back(*e.exact);
    EXPECT_EQ(got, expected);
}

TEST(Catalog, HeunBuildsLameAndSextic) {
    for (const Rational& mu : {Rational(2), rat(-1, 3)})
        for (std::size_t n : {0u, 1u, 3u}) {
            const Rational nn(static_cast<unsigned long>(n)), d = rat(5, 4);
            QESCoeffs c;
            c.a3 = 4;
            c.a2 = -12 * mu;
            c.a1 = 12 * d;
            c.b2 = 6;
            c.b1 = -12 * mu;
            c.b0 = 6 * d;
            c.d1 = -2 * nn * (2 * nn + 1);
            c.d0 = 2 * nn * (2 * nn + 1) * mu;
            OpSpec h = heun(c, n);
            EXPECT_EQ(h.element, lame(mu, d, n).element);
            EXPECT_EQ(h.family, Family::QES);
            EXPECT_EQ(h.invariant_degree, n);
        }
    for (std::size_t n : {0u, 2u}) {
        const Rational alpha = rat(3, 2), beta = -2, nn(static_cast<unsigned long>(n));
        QESCoeffs c;
        c.a1 = -4;
        c.b2 = 4 * alpha;
        c.b1 = 4 * beta;
        c.b0 = -2;
        c.d1 = -4 * alpha * nn;
        EXPECT_EQ(heun(c, n).element, sextic(alpha, beta, n).element);
    }
}

TEST(Catalog, HeunRejectsViolatingD1) {
    QESCoeffs c;
    c.a3 = 4;
    c.b2 = 6;
    c.d1 = -20;  // n = 2 needs -20; n = 3 needs -42
    EXPECT_NO_THROW(heun(c, 2));
    try {
        heun(c, 3);
        FAIL() << "expected ConstraintViolation";
    } catch (const ConstraintViolation& e) {
        EXPECT_EQ(e.residual, 4 * 6 + 6 * 3 - 20);
    }
    c.a4 = 1;
    EXPECT_THROW(heun(c, 2), std::invalid_argument);
}

TEST(Catalog, HeunFuchsIndexAtMostOne) {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        QESCoeffs c;
        c.a3 = oracle::random_rational(rng);
        c.a2 = oracle::random_rational(rng);
        c.a1 = oracle::random_rational(rng);
        c.a0 = oracle::random_rational(rng);
        c.b2 = oracle::random_rational(rng);
        c.b1 = oracle::random_rational(rng);
        c.b0 = oracle::random_rational(rng);
        c.d0 = oracle::random_rational(rng);
        const std::size_t n = trial % 5;
        const Rational nn(static_cast<unsigned long>(n));
        c.d1 = -c.a3 * nn * (nn - 1) - c.b2 * nn;
        const OpSpec h = heun(c, n);
        for (const auto& r : {RealizationId::differential(), RealizationId::delta_lattice(rat(1, 2)),
                              RealizationId::q_lattice(rat(2, 3))})
            for (std::size_t k = 0; k <= 8; ++k) {
                ASSERT_LE(realize_apply(h.element, r, UniPoly::monomial(k)).degree(), static_cast<long>(k + 1));
            }
    }
}

TEST(Catalog, LameSpectrumAndInvariants) {
    for (const Rational& mu : {Rational(2), rat(1, 3), rat(-5, 2)})
        for (const Rational& d : {Rational(-1), rat(-2, 7), rat(1, 100)}) {
            Spectrum s = spectrum(lame(mu, d, 1).element, RealizationId::differential(), 1);
            const double r = 6 * std::sqrt(Rational(mu * mu - d).get_d());
            auto v = real_values(s);
            ASSERT_EQ(v.size(), 2u);
            EXPECT_NEAR(v[0], -r, 1e-12 * r);
            EXPECT_NEAR(v[1], r, 1e-12 * r);
        }
    // μ² < d: a purely imaginary pair
    Spectrum c = spectrum(lame(rat(1, 3), 1, 1).element, RealizationId::differential(), 1);
    ASSERT_EQ(c.eigenvalues.size(), 2u);
    const double r = 6 * std::sqrt(8.0 / 9.0);
    EXPECT_NEAR(c.eigenvalues[0].re, 0, 1e-12);
    EXPECT_NEAR(std::abs(c.eigenvalues[0].im), r, 1e-12 * r);
    EXPECT_NEAR(c.eigenvalues[0].im + c.eigenvalues[1].im, 0, 1e-12);
    EXPECT_EQ(elliptic_invariants(2, 1), std::make_pair(Rational(36), Rational(40)));
    EXPECT_EQ(elliptic_invariants(rat(1, 2), 0), std::make_pair(Rational(3), Rational(1)));
    for (std::size_t n = 0; n <= 4; ++n) {
        EXPECT_EQ(invariant_degree_scan(lame(2, 1, n).element, 8), std::vector<std::size_t>{n});
    }
}

TEST(Catalog, SexticSpectrum) {
    for (const Rational& alpha : {Rational(1), rat(1, 4)})
        for (const Rational& beta : {Rational(0), Rational(1), rat(-3, 2)}) {
            Spectrum s = spectrum(sextic(alpha, beta, 1).element, RealizationId::differential(), 1);
            const double a = alpha.get_d(), b = beta.get_d(), r = std::sqrt(4 * b * b + 8 * a);
            auto v = real_values(s);
            ASSERT_EQ(v.size(), 2u);
            EXPECT_NEAR(v[0], 2 * b - r, 1e-12 * (1 + r));
            EXPECT_NEAR(v[1], 2 * b + r, 1e-12 * (1 + r));
            EXPECT_EQ(heun_constraint_residual(0, 4 * alpha, -4 * alpha, 1), 0);
        }
    Spectrum z = spectrum(sextic(3, -1, 0).element, RealizationId::differential(), 0);
    ASSERT_EQ(z.eigenpairs.size(), 1u);
    EXPECT_EQ(*z.eigenpairs[0].value.exact, 0);
    EXPECT_EQ(z.eigenpairs[0].exact_vector, oracle::ints({1}));
}

TEST(Catalog, SexticHamiltonianCoefficients) {
    EXPECT_EQ(sextic_hamiltonian_coeffs(1, 0, 1), (SexticPotential{1, 0, -7, 0}));
    EXPECT_EQ(sextic_hamiltonian_coeffs(0, 1, 5), (SexticPotential{0, 0, 1, -1}));
    EXPECT_EQ(sextic_hamiltonian_coeffs(1, 1, 0), (SexticPotential{1, 2, -2, -1}));
}

TEST(Catalog, Sl2Examples) {
    EXPECT_EQ(jplus_via_number(3), jplus(3).element);
    EXPECT_EQ(commutator(jzero(5).element, jminus().element), -1 * jminus().element);
    EXPECT_EQ(commutator(jplus(5).element, jminus().element), -2 * jzero(5).element);
    EXPECT_EQ(casimir(0), WeylElement());
    EXPECT_EQ(casimir(2), scalar_of(2));
    EXPECT_EQ(casimir(-1), scalar_of(rat(-1, 4)));
}

TEST(Catalog, RegistryBuildsEveryEntry) {
    const Bindings full{{"alpha", rat(3, 2)}, {"beta", 1}, {"m", 2}, {"d", 1}, {"n", 2}, {"k", 4},
                        {"a3", 4}, {"a2", 0}, {"a1", 0}, {"b2", 6}, {"b1", 0}, {"b0", 0}, {"d1", -20}};
    std::vector<std::string> names;
    for (const auto& entry : catalog()) {
        names.push_back(entry.name);
        OpSpec op = entry.build(full);
        EXPECT_EQ(op.name, entry.name);
        EXPECT_EQ(op.family, entry.family);
        if (entry.family == Family::QES) { EXPECT_EQ(op.invariant_degree, 2u) << entry.name; }
    }
    EXPECT_EQ(names, (std::vector<std::string>{"number", "hermite", "laguerre", "heun", "lame", "sextic", "jplus",
                                               "jzero", "jminus"}));
    EXPECT_EQ(build_operator("lame", {{"m", 2}, {"d", 1}, {"n", 3}}).element, lame(2, 1, 3).element);
    EXPECT_EQ(build_operator("jplus", {{"k", rat(1, 2)}}).element, jplus(rat(1, 2)).element);
}

TEST(Catalog, RegistryBindingErrors) {
    EXPECT_THROW(build_operator("nope", {}), std::out_of_range);
    try {
        build_operator("lame", {{"m", 2}, {"n", 3}});
        FAIL() << "expected UnboundParameter";
    } catch (const UnboundParameter& e) {
        EXPECT_EQ(e.name, "d");
    }
    EXPECT_THROW(build_operator("lame", {{"m", 2}, {"d", 1}, {"n", rat(1, 2)}}), BindingError);
    EXPECT_THROW(build_operator("sextic", {{"alpha", 1}, {"beta", 1}, {"n", -1}}), BindingError);
    // heun defaults a0 = d0 = 0 but still validates the constraint
    EXPECT_THROW(build_operator("heun", {{"a3", 4}, {"a2", 0}, {"a1", 0}, {"b2", 6}, {"b1", 0}, {"b0", 0},
                                         {"d1", -21}, {"n", 2}}),
                 ConstraintViolation);
}

// ---- properties -------------------------------------------------------------

TEST(CatalogProperty, QesEntriesScanExactlyAtDeclaredDegree) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = trial % 6;
        const Rational p = oracle::random_nonzero_rational(rng), q = oracle::random_nonzero_rational(rng);
        for (const OpSpec& op : {lame(p, q, n), sextic(p, q, n)}) {
            ASSERT_EQ(op.family, Family::QES);
            ASSERT_EQ(op.invariant_degree, n);
            ASSERT_EQ(invariant_degree_scan(op.element, 10), std::vector<std::size_t>{n}) << op.name << " n=" << n;
        }
    }
}

TEST(CatalogProperty, Sl2RelationsForRandomK) {
    Rng rng(13);
    const WeylElement jm = jminus().element;
    for (int trial = 0; trial < 20; ++trial) {
        const Rational k = oracle::random_rational(rng, 20, 7);
        const WeylElement jp = jplus(k).element, j0 = jzero(k).element;
        ASSERT_EQ(commutator(j0, jp), jp);
        ASSERT_EQ(commutator(j0, jm), -1 * jm);
        ASSERT_EQ(commutator(jp, jm), -2 * j0);
        ASSERT_EQ(casimir(k), scalar_of(k / 2 * (k / 2 + 1)));
        ASSERT_EQ(jplus_via_number(k), jp);
    }
}
