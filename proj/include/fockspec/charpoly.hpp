#ifndef FOCKSPEC_CHARPOLY_HPP
#define FOCKSPEC_CHARPOLY_HPP

#include <stdexcept>
#include <vector>

#include "fockspec/matrix.hpp"
#include "fockspec/unipoly.hpp"

namespace fockspec {

/// Monic characteristic polynomial det(tI - M), ascending coefficients.
using CharPoly = UniPoly;

/// Exact characteristic polynomial: similarity reduction to upper Hessenberg form
/// over Q, then the standard Hessenberg determinant recurrence. O(n^3) rational ops.
inline CharPoly char_poly(const RationalMatrix& m) {
    if (!m.square()) throw std::invalid_argument("char_poly of non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix h = m;

    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t piv = j + 1;
        while (piv < n && h(piv, j) == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            for (std::size_t c = 0; c < n; ++c) std::swap(h(piv, c), h(j + 1, c));
            for (std::size_t r = 0; r < n; ++r) std::swap(h(r, piv), h(r, j + 1));
        }
        const Rational inv = 1 / h(j + 1, j);
        for (std::size_t r = j + 2; r < n; ++r) {
            if (h(r, j) == 0) continue;
            const Rational f = h(r, j) * inv;
            // row_r -= f·row_{j+1}, then col_{j+1} += f·col_r keeps the similarity.
            for (std::size_t c = 0; c < n; ++c) h(r, c) -= f * h(j + 1, c);
            for (std::size_t rr = 0; rr < n; ++rr) h(rr, j + 1) += f * h(rr, r);
        }
    }

    // p[k] = char poly of the leading k×k block.
    std::vector<UniPoly> p(n + 1);
    p[0] = UniPoly::constant(1);
    for (std::size_t k = 1; k <= n; ++k) {
        p[k] = UniPoly{-h(k - 1, k - 1), 1} * p[k - 1];
        Rational sub = 1;
        for (std::size_t i = 1; i < k; ++i) {
            sub *= h(k - i, k - i - 1);
            if (sub == 0) break;
            p[k] = p[k] - (sub * h(k - i - 1, k - 1)) * p[k - i - 1];
        }
    }
    return p[n];
}

}  // namespace fockspec

#endif  // FOCKSPEC_CHARPOLY_HPP
