#ifndef FOCKSPEC_TESTS_SUPPORT_HPP
#define FOCKSPEC_TESTS_SUPPORT_HPP

// Random generators and independent oracles shared by the test suites. Nothing here
// calls the library routine it is used to check.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fockspec/matrix.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/unipoly.hpp"
#include "fockspec/weyl.hpp"

namespace fockspec::oracle {

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, long num_bound = 9, long den_bound = 4) {
    std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
    return rat(num(rng), den(rng));
}

inline Rational random_nonzero_rational(Rng& rng, long num_bound = 9, long den_bound = 4) {
    Rational r;
    do r = random_rational(rng, num_bound, den_bound);
    while (r == 0);
    return r;
}

/// Up to `max_terms` terms with b- and a-exponents <= max_deg.
inline WeylElement random_element(Rng& rng, std::size_t max_deg = 4, std::size_t max_terms = 5) {
    std::uniform_int_distribution<std::size_t> deg(0, max_deg), count(1, max_terms);
    WeylElement u;
    const std::size_t n = count(rng);
    for (std::size_t t = 0; t < n; ++t) u.accumulate({deg(rng), deg(rng)}, random_rational(rng));
    return u;
}

/// Normal form of a word in a, b by repeated rewriting ab -> ba + 1, no closed form.
inline WeylElement rewrite_word(const std::string& word) {
    std::map<std::string, Rational> pending{{word, 1}};
    WeylElement out;
    while (!pending.empty()) {
        auto node = pending.extract(pending.begin());
        const std::string& w = node.key();
        const Rational& c = node.mapped();
        auto pos = w.find("ab");
        if (pos == std::string::npos) {
            std::size_t nb = 0;
            while (nb < w.size() && w[nb] == 'b') ++nb;
            out.accumulate({nb, w.size() - nb}, c);
            continue;
        }
        std::string swapped = w, dropped = w;
        swapped[pos] = 'b';
        swapped[pos + 1] = 'a';
        dropped.erase(pos, 2);
        pending[swapped] += c;
        pending[dropped] += c;
    }
    return out;
}

/// Determinant by fraction-carrying Gaussian elimination.
inline Rational determinant(RationalMatrix m) {
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            const Rational f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

/// det(tI - M) by evaluating at t = 0..n and Lagrange interpolation.
inline UniPoly char_poly_by_interpolation(const RationalMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<Rational> xs(n + 1), ys(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        xs[i] = Rational(static_cast<unsigned long>(i));
        RationalMatrix s(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) s(r, c) = (r == c ? xs[i] : Rational(0)) - m(r, c);
        ys[i] = determinant(s);
    }
    UniPoly out;
    for (std::size_t i = 0; i <= n; ++i) {
        UniPoly basis = UniPoly::constant(1);
        Rational denom = 1;
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == i) continue;
            basis = basis * UniPoly{-xs[j], 1};
            denom *= xs[i] - xs[j];
        }
        out = out + (ys[i] / denom) * basis;
    }
    return out;
}

inline RationalMatrix diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

inline std::vector<Rational> ints(std::initializer_list<long> v) {
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

}  // namespace fockspec::oracle

#endif  // FOCKSPEC_TESTS_SUPPORT_HPP
