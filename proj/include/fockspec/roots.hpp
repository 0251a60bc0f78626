#ifndef FOCKSPEC_ROOTS_HPP
#define FOCKSPEC_ROOTS_HPP

// Roots of exact rational polynomials.
//
//   1. zero and other rational roots are found exactly (rational root theorem) and
//      deflated exactly;
//   2. what remains is split into square-free factors (Yun), so multiplicities are
//      exact and no numeric clustering is needed;
//   3. real roots of each factor are isolated with a Sturm sequence and refined by
//      exact bisection at dyadic points;
//   4. non-real roots come from Aberth iteration, polished by Newton, and certified by
//      a high-precision residual.
// Floating point never touches the polynomial before step 3.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockspec/errors.hpp"
#include "fockspec/rational.hpp"
#include "fockspec/unipoly.hpp"

namespace fockspec {

struct RootOptions {
    double tol = 1e-12;
    std::size_t max_iter = 500;
};

/// Either an exact rational or a numeric approximation whose residual is the smaller of
/// |p(λ)| / (1 + max|coeff|) and the backward error |p(λ)| / Σ|c_k||λ|^k.
struct Eigenvalue {
    std::optional<Rational> exact;
    double re = 0;
    double im = 0;
    double residual = 0;

    static Eigenvalue from_exact(const Rational& r) { return Eigenvalue{r, r.get_d(), 0.0, 0.0}; }
    static Eigenvalue numeric(double re, double im, double residual) {
        return Eigenvalue{std::nullopt, re, im, residual};
    }
    bool is_exact() const { return exact.has_value(); }
    bool is_real() const { return is_exact() || im == 0; }
    std::complex<double> value() const { return {re, im}; }
};

/// Exact values ascending, then numeric ones by (re, im).
inline bool eigenvalue_order(const Eigenvalue& x, const Eigenvalue& y) {
    if (x.is_exact() != y.is_exact()) return x.is_exact();
    if (x.is_exact()) return *x.exact < *y.exact;
    if (x.re != y.re) return x.re < y.re;
    return x.im < y.im;
}

class NumericNonConvergence : public Error {
public:
    NumericNonConvergence(const std::string& what, std::vector<Eigenvalue> partial)
        : Error("numeric non-convergence: " + what), partial(std::move(partial)) {}
    std::vector<Eigenvalue> partial;
};

namespace detail {

inline constexpr unsigned long high_precision_bits = 256;

/// |p(z)| / (1 + max|c|) and |p(z)| / Σ|c_k||z|^k, both evaluated in 256-bit floats.
inline std::pair<double, double> residuals(const UniPoly& p, double re, double im) {
    const auto prec = high_precision_bits;
    mpf_class zr(re, prec), zi(im, prec), ar(0, prec), ai(0, prec), scale(0, prec), mag(0, prec);
    mpf_class az(sqrt(mpf_class(zr * zr + zi * zi, prec)), prec);
    mpf_class maxc(0, prec);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) {
        mpf_class c(*it, prec);
        mpf_class nr(ar * zr - ai * zi + c, prec);
        mpf_class ni(ar * zi + ai * zr, prec);
        ar = nr;
        ai = ni;
        mpf_class ac(abs(c), prec);
        scale = scale * az + ac;
        if (ac > maxc) maxc = ac;
    }
    mag = sqrt(mpf_class(ar * ar + ai * ai, prec));
    double scaled = mpf_class(mag / (1 + maxc), prec).get_d();
    double backward = scale == 0 ? 0.0 : mpf_class(mag / scale, prec).get_d();
    return {scaled, backward};
}

inline long double to_long_double(const Rational& r) {
    mpf_class f(r, 128);
    double hi = f.get_d();
    mpf_class rest(f - hi, 128);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

/// Primitive integer multiple of p (positive leading coefficient).
inline std::vector<Integer> integer_coeffs(const UniPoly& p) {
    Integer l = 1;
    for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    std::vector<Integer> out;
    Integer g = 0;
    for (const auto& c : p.coeffs()) {
        Integer v = c.get_num() * (l / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        out.push_back(v);
    }
    if (g != 0)
        for (auto& v : out) v /= g;
    if (!out.empty() && out.back() < 0)
        for (auto& v : out) v = -v;
    return out;
}

/// Positive divisors of |n| by trial division; nullopt when |n| has a large composite
/// cofactor or too many divisors to enumerate.
inline std::optional<std::vector<Integer>> divisors(Integer n) {
    n = abs(n);
    if (n == 0) return std::nullopt;
    constexpr unsigned long trial_limit = 1000000;
    constexpr std::size_t max_divisors = 20000;
    std::vector<std::pair<Integer, unsigned>> factors;
    for (unsigned long d = 2; d <= trial_limit && Integer(d) * d <= n; d += (d == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            n /= d;
            ++e;
        }
        if (e) factors.emplace_back(Integer(d), e);
    }
    if (n > 1) {
        if (n > Integer(trial_limit) * trial_limit && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) return std::nullopt;
        factors.emplace_back(n, 1);
    }
    std::vector<Integer> divs{1};
    for (const auto& [pr, e] : factors) {
        const std::size_t base = divs.size();
        if (base * (e + 1) > max_divisors) return std::nullopt;
        Integer pw = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pw *= pr;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pw);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

/// p / (t - r) for an exact root r.
inline UniPoly deflate(const UniPoly& p, const Rational& r) {
    const auto& c = p.coeffs();
    std::vector<Rational> q(c.size() - 1);
    Rational carry = 0;
    for (std::size_t k = c.size(); k-- > 1;) {
        carry = carry * r + c[k];
        q[k - 1] = carry;
    }
    return UniPoly(std::move(q));
}

/// Yun's square-free decomposition: returns (factor, multiplicity) with monic factors.
inline std::vector<std::pair<UniPoly, std::size_t>> squarefree_decomposition(const UniPoly& f) {
    std::vector<std::pair<UniPoly, std::size_t>> out;
    if (f.degree() < 1) return out;
    UniPoly fp = f.derivative();
    UniPoly a = gcd(f, fp);
    UniPoly b = divmod(f, a).first;
    UniPoly c = divmod(fp, a).first;
    UniPoly d = c - b.derivative();
    std::size_t i = 1;
    while (b.degree() > 0) {
        UniPoly g = gcd(b, d);
        if (g.degree() > 0) out.emplace_back(g.monic(), i);
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

/// Sturm chain, each member scaled by a positive constant to keep sizes down.
inline std::vector<UniPoly> sturm_chain(const UniPoly& f) {
    std::vector<UniPoly> chain{f, f.derivative()};
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        UniPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        r = (-1 / abs(r.leading())) * r;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline std::size_t sign_variations(const std::vector<UniPoly>& chain, const Rational& x) {
    std::size_t v = 0;
    int last = 0;
    for (const auto& p : chain) {
        int s = sgn(p(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

/// 1 + max|c_k / c_n|: every root lies strictly inside (-B, B).
inline Rational cauchy_bound(const UniPoly& f) {
    Rational m = 0;
    for (std::size_t k = 0; k + 1 < f.coeffs().size(); ++k) m = std::max(m, Rational(abs(f[k] / f.leading())));
    return m + 1;
}

/// Simplest rational (smallest denominator) in the open interval (lo, hi), lo < hi.
inline Rational simplest_between(const Rational& lo, const Rational& hi) {
    auto floor_of = [](const Rational& x) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        return f;
    };
    const Integer fl = floor_of(lo);
    if (Rational(fl) + 1 < hi) {
        // an integer lies strictly inside; take the one of least magnitude
        if (lo < 0 && hi > 0) return 0;
        if (lo >= 0) return Rational(fl) + 1;
        Integer c;
        mpz_cdiv_q(c.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        return Rational(c) - 1;
    }
    // (lo, hi) sits inside [fl, fl + 1]
    if (lo == fl) return Rational(fl) + Rational(1) / (Rational(floor_of(1 / (hi - fl))) + 1);
    return Rational(fl) + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl));
}

struct RealIsolation {
    Rational lo;  // exclusive
    Rational hi;  // inclusive
};

/// Disjoint intervals (lo, hi], one root of the square-free f in each.
inline std::vector<RealIsolation> isolate_real_roots(const UniPoly& f, std::size_t max_iter, std::size_t& steps) {
    auto chain = sturm_chain(f);
    Rational bound = cauchy_bound(f);
    std::vector<RealIsolation> out;
    std::vector<RealIsolation> todo{{-bound, bound}};
    while (!todo.empty()) {
        auto iv = todo.back();
        todo.pop_back();
        const std::size_t count = sign_variations(chain, iv.lo) - sign_variations(chain, iv.hi);
        if (count == 0) continue;
        if (count == 1) {
            out.push_back(iv);
            continue;
        }
        if (++steps > max_iter * 64) throw NumericNonConvergence("Sturm isolation did not separate roots", {});
        Rational mid = (iv.lo + iv.hi) / 2;
        todo.push_back({iv.lo, mid});
        todo.push_back({mid, iv.hi});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    return out;
}

/// Shrinks (lo, hi] around the unique root of f by exact bisection until width is
/// below `width`. Requires f(hi) != 0 or hi is the root.
inline void bisect_to(const UniPoly& f, RealIsolation& iv, const Rational& width, std::size_t max_steps) {
    int s_hi = sgn(f(iv.hi));
    if (s_hi == 0) {
        iv.lo = iv.hi;
        return;
    }
    std::size_t steps = 0;
    while (iv.hi - iv.lo > width) {
        if (++steps > max_steps) throw NumericNonConvergence("bisection iteration cap reached", {});
        Rational mid = (iv.lo + iv.hi) / 2;
        int s = sgn(f(mid));
        if (s == 0) {
            iv.lo = iv.hi = mid;
            return;
        }
        if (s == s_hi)
            iv.hi = mid;
        else
            iv.lo = mid;
    }
}

using cld = std::complex<long double>;

inline cld horner(const std::vector<long double>& c, cld z) {
    cld acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

/// All complex roots of a square-free f by Aberth–Ehrlich iteration.
inline std::vector<cld> aberth(const UniPoly& f, std::size_t max_iter) {
    const std::size_t n = static_cast<std::size_t>(f.degree());
    std::vector<long double> c, dc;
    for (const auto& x : f.coeffs()) c.push_back(to_long_double(x));
    const UniPoly df = f.derivative();
    for (const auto& x : df.coeffs()) dc.push_back(to_long_double(x));
    const long double radius = static_cast<long double>(cauchy_bound(f).get_d());
    std::vector<cld> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double ang = 2 * std::numbers::pi_v<long double> * (k + 0.25L) / n + 0.4L;
        z[k] = std::polar(radius * 0.5L, ang);
    }
    for (std::size_t it = 0; it < max_iter; ++it) {
        long double worst = 0;
        for (std::size_t k = 0; k < n; ++k) {
            cld ratio = horner(c, z[k]) / horner(dc, z[k]);
            cld s = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (z[k] - z[j]);
            cld w = ratio / (1.0L - ratio * s);
            if (!std::isfinite(std::abs(w))) w = 0;
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0L, std::abs(z[k])));
        }
        if (worst < 1e-17L) return z;
    }
    throw NumericNonConvergence("Aberth iteration cap reached", {});
}

inline cld newton_polish(const UniPoly& f, cld z) {
    std::vector<long double> c, dc;
    for (const auto& x : f.coeffs()) c.push_back(to_long_double(x));
    const UniPoly df = f.derivative();
    for (const auto& x : df.coeffs()) dc.push_back(to_long_double(x));
    for (int i = 0; i < 8; ++i) {
        cld d = horner(dc, z);
        if (std::abs(d) == 0) break;
        cld step = horner(c, z) / d;
        z -= step;
        if (std::abs(step) <= 1e-19L * std::max(1.0L, std::abs(z))) break;
    }
    return z;
}

}  // namespace detail

/// All roots of p (a multiset of size deg p), sorted by eigenvalue_order.
inline std::vector<Eigenvalue> roots(const UniPoly& p, const RootOptions& opt = {}) {
    if (!(opt.tol > 0)) throw std::invalid_argument("root tolerance must be positive");
    if (p.degree() < 1) return {};
    std::vector<Eigenvalue> out;
    UniPoly rest = p.monic();

    while (rest.degree() >= 1 && rest[0] == 0) {
        out.push_back(Eigenvalue::from_exact(0));
        rest = detail::deflate(rest, 0);
    }

    // Rational roots p/q: p | constant term, q | leading coefficient.
    bool rational_search_complete = true;
    if (rest.degree() >= 1) {
        auto ic = detail::integer_coeffs(rest);
        auto num_divs = detail::divisors(ic.front());
        auto den_divs = detail::divisors(ic.back());
        if (num_divs && den_divs && num_divs->size() * den_divs->size() <= 400000) {
            for (const auto& q : *den_divs) {
                for (const auto& pn : *num_divs) {
                    Integer g;
                    mpz_gcd(g.get_mpz_t(), pn.get_mpz_t(), q.get_mpz_t());
                    if (g != 1) continue;
                    for (int sign : {1, -1}) {
                        Rational cand = rat(Integer(sign * pn), q);
                        while (rest.degree() >= 1 && rest(cand) == 0) {
                            out.push_back(Eigenvalue::from_exact(cand));
                            rest = detail::deflate(rest, cand);
                        }
                    }
                    if (rest.degree() < 1) break;
                }
                if (rest.degree() < 1) break;
            }
        } else {
            rational_search_complete = false;
        }
    }

    std::size_t steps = 0;
    auto certify = [&](double re, double im) {
        auto [scaled, backward] = detail::residuals(p, re, im);
        if (scaled > opt.tol && backward > opt.tol) {
            out.push_back(Eigenvalue::numeric(re, im, scaled));
            throw NumericNonConvergence("root residual above tolerance", out);
        }
        return std::min(scaled, backward);
    };

    for (const auto& [factor, mult] : detail::squarefree_decomposition(rest)) {
        std::vector<Eigenvalue> found;
        auto intervals = detail::isolate_real_roots(factor, opt.max_iter, steps);
        std::size_t real_count = 0;
        std::vector<double> real_values;
        for (auto iv : intervals) {
            ++real_count;
            if (!rational_search_complete) {
                // Any rational root has denominator dividing the leading coefficient L;
                // two such rationals are >= 1/L^2 apart, so within a narrower interval
                // the simplest rational is the only candidate.
                auto ic = detail::integer_coeffs(factor);
                Rational width = Rational(1) / (Rational(ic.back()) * ic.back() * 2);
                detail::bisect_to(factor, iv, width, opt.max_iter * 64);
                Rational cand = iv.lo == iv.hi ? iv.hi : detail::simplest_between(iv.lo, iv.hi);
                if ((cand > iv.lo || iv.lo == iv.hi) && cand <= iv.hi && factor(cand) == 0) {
                    found.push_back(Eigenvalue::from_exact(cand));
                    real_values.push_back(cand.get_d());
                    continue;
                }
            }
            // Refine to (nearly) double resolution.
            Rational mag = std::max(abs(iv.lo), abs(iv.hi));
            Rational width = std::max(mag, Rational(1)) * Rational(1, 1ul << 60);
            detail::bisect_to(factor, iv, width, opt.max_iter);
            double x = Rational((iv.lo + iv.hi) / 2).get_d();
            found.push_back(Eigenvalue::numeric(x, 0.0, certify(x, 0.0)));
            real_values.push_back(x);
        }

        const std::size_t deg = static_cast<std::size_t>(factor.degree());
        if (real_count < deg) {
            auto z = detail::aberth(factor, opt.max_iter);
            std::sort(z.begin(), z.end(), [](auto x, auto y) { return std::abs(x.imag()) > std::abs(y.imag()); });
            const std::size_t ncomplex = deg - real_count;
            std::vector<detail::cld> upper;
            for (std::size_t k = 0; k < ncomplex; ++k) {
                auto w = detail::newton_polish(factor, z[k]);
                if (w.imag() > 0) upper.push_back(w);
            }
            if (upper.size() * 2 != ncomplex)
                throw NumericNonConvergence("complex roots do not pair into conjugates", out);
            for (auto w : upper) {
                double re = static_cast<double>(w.real()), im = static_cast<double>(w.imag());
                double res = certify(re, im);
                found.push_back(Eigenvalue::numeric(re, im, res));
                found.push_back(Eigenvalue::numeric(re, -im, res));
            }
        }
        for (std::size_t k = 0; k < mult; ++k) out.insert(out.end(), found.begin(), found.end());
    }

    std::sort(out.begin(), out.end(), eigenvalue_order);
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_ROOTS_HPP
