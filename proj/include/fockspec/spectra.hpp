#ifndef FOCKSPEC_SPECTRA_HPP
#define FOCKSPEC_SPECTRA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fockspec/charpoly.hpp"
#include "fockspec/errors.hpp"
#include "fockspec/matrix.hpp"
#include "fockspec/realizations.hpp"
#include "fockspec/roots.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec {

/// Matrix of u on the degree-<=n polynomial sector of realization r (the m = `fiber`
/// fiber for the complex plane). Throws LeakageError if that sector is not invariant.
inline RationalMatrix restrict(const WeylElement& u, const RealizationId& r, std::size_t n, std::size_t fiber = 0) {
    FlagMatrix fm = r.univariate() ? realize_matrix(u, r, n) : complex_fiber_matrix(u, fiber, n);
    if (!fm.invariant()) {
        const auto& [col, overflow] = *fm.leakage.begin();
        throw LeakageError(col, overflow.coeffs());
    }
    return std::move(fm.entries);
}

/// Abstract Fock-space version of restrict().
inline RationalMatrix restrict_fock(const WeylElement& u, std::size_t n) {
    FlagMatrix fm = flag_matrix(u, n);
    if (!fm.invariant()) {
        const auto& [col, overflow] = *fm.leakage.begin();
        throw LeakageError(col, overflow.coeffs());
    }
    return std::move(fm.entries);
}

/// Exact nullspace basis of M - λI, each vector scaled so its highest-degree nonzero
/// coefficient is 1. Empty when λ is not an eigenvalue.
inline std::vector<std::vector<Rational>> eigenvectors(const RationalMatrix& m, const Rational& lambda) {
    RationalMatrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lambda;
    return nullspace(std::move(shifted));
}

using ComplexVector = std::vector<std::complex<double>>;

/// Inverse iteration for a numeric eigenvalue. The result is scaled so its
/// highest-degree significant coefficient is 1. Checks ‖Mv - λv‖ <= 10·tol·max(1, ‖M‖∞)
/// for the unit-norm v.
inline ComplexVector eigenvector_numeric(const RationalMatrix& m, std::complex<double> lambda, double tol) {
    using cld = std::complex<long double>;
    const std::size_t n = m.rows();
    std::vector<cld> a(n * n);
    long double norm_inf = 0;
    for (std::size_t i = 0; i < n; ++i) {
        long double row = 0;
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = detail::to_long_double(m(i, j));
            row += std::abs(a[i * n + j]);
        }
        norm_inf = std::max(norm_inf, row);
    }
    const std::vector<cld> orig = a;
    const cld lam(lambda.real(), lambda.imag());
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= lam;

    // LU with partial pivoting; exact-zero pivots are nudged off zero.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    const long double tiny = std::max(1.0L, norm_inf) * 1e-18L;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            std::swap(perm[k], perm[p]);
        }
        if (std::abs(a[k * n + k]) < tiny) a[k * n + k] = tiny;
        for (std::size_t i = k + 1; i < n; ++i) {
            cld f = a[i * n + k] / a[k * n + k];
            a[i * n + k] = f;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    auto solve = [&](std::vector<cld> rhs) {
        std::vector<cld> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cld s = rhs[perm[i]];
            for (std::size_t j = 0; j < i; ++j) s -= a[i * n + j] * y[j];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            cld s = y[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * y[j];
            y[i] = s / a[i * n + i];
        }
        return y;
    };
    auto normalize = [](std::vector<cld>& v) {
        long double s = 0;
        for (auto x : v) s += std::norm(x);
        s = std::sqrt(s);
        for (auto& x : v) x /= s;
    };

    std::vector<cld> v(n, cld(1, 0));
    normalize(v);
    for (int it = 0; it < 4; ++it) {
        v = solve(v);
        normalize(v);
    }

    long double res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cld s = -lam * v[i];
        for (std::size_t j = 0; j < n; ++j) s += orig[i * n + j] * v[j];
        res += std::norm(s);
    }
    res = std::sqrt(res);
    if (!(res <= 10 * tol * std::max(1.0L, norm_inf)))
        throw NumericNonConvergence("inverse iteration residual " + std::to_string(static_cast<double>(res)), {});

    long double biggest = 0;
    for (auto x : v) biggest = std::max(biggest, std::abs(x));
    std::size_t lead = n;
    while (lead > 0 && std::abs(v[lead - 1]) <= 1e-12L * biggest) --lead;
    const cld scale = v[lead - 1];
    ComplexVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cld x = v[i] / scale;
        out[i] = {static_cast<double>(x.real()), static_cast<double>(x.imag())};
    }
    return out;
}

struct EigenPair {
    Eigenvalue value;
    std::vector<Rational> exact_vector;  // set for exact eigenvalues
    ComplexVector numeric_vector;        // set for numeric eigenvalues
};

struct Spectrum {
    std::string operator_id;
    std::string realization;
    std::size_t degree = 0;
    RationalMatrix matrix;
    CharPoly char_poly;
    std::vector<Eigenvalue> eigenvalues;  // with multiplicity
    std::vector<EigenPair> eigenpairs;    // one per eigenvector, at most degree + 1
};

/// Full spectral data of an invariant matrix: exact char poly first, then roots, then
/// one eigenpair per independent eigenvector.
inline Spectrum spectrum_of_matrix(RationalMatrix m, const RootOptions& opt = {}) {
    Spectrum s;
    s.degree = m.rows() == 0 ? 0 : m.rows() - 1;
    s.char_poly = char_poly(m);
    s.eigenvalues = roots(s.char_poly, opt);
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        const auto& ev = s.eigenvalues[k];
        if (k > 0) {
            const auto& prev = s.eigenvalues[k - 1];
            bool same = ev.is_exact() ? (prev.is_exact() && *prev.exact == *ev.exact)
                                      : (!prev.is_exact() && prev.re == ev.re && prev.im == ev.im);
            if (same) continue;
        }
        if (ev.is_exact()) {
            for (auto& v : eigenvectors(m, *ev.exact)) s.eigenpairs.push_back({ev, std::move(v), {}});
        } else {
            s.eigenpairs.push_back({ev, {}, eigenvector_numeric(m, ev.value(), opt.tol)});
        }
    }
    s.matrix = std::move(m);
    return s;
}

inline Spectrum spectrum(const WeylElement& u, const RealizationId& r, std::size_t n, const RootOptions& opt = {},
                         std::size_t fiber = 0) {
    Spectrum s = spectrum_of_matrix(restrict(u, r, n, fiber), opt);
    s.realization = r.univariate() ? r.label() : r.label() + ":" + std::to_string(fiber);
    return s;
}

struct IsospectralEntry {
    std::string realization;
    CharPoly char_poly;
};

struct IsospectralReport {
    std::size_t degree = 0;
    std::vector<IsospectralEntry> entries;
    bool all_equal = true;
};

/// Characteristic polynomial of u on the degree-n sector for every univariate
/// realization in `rs` and for the complex plane at every fiber in `fibers`.
/// Equality is exact. A ComplexPlane entry in `rs` is redundant with `fibers`.
inline IsospectralReport isospectral_check(const WeylElement& u, std::size_t n, const std::vector<RealizationId>& rs,
                                           const std::vector<std::size_t>& fibers = {0}) {
    IsospectralReport rep;
    rep.degree = n;
    for (const auto& r : rs)
        if (r.univariate()) rep.entries.push_back({r.label(), char_poly(restrict(u, r, n))});
    const auto complex = RealizationId::complex_plane();
    for (auto m : fibers) rep.entries.push_back({"complex:" + std::to_string(m), char_poly(restrict(u, complex, n, m))});
    for (const auto& e : rep.entries)
        if (!(e.char_poly == rep.entries.front().char_poly)) rep.all_equal = false;
    return rep;
}

}  // namespace fockspec

#endif  // FOCKSPEC_SPECTRA_HPP
