#pragma once

// Dense univariate polynomials over a tower level, low-to-high coefficients.
// A = F_q[T] lives at Level::Fq, O_H = F_{q^r}[T] at Level::Fqr.  The zero
// polynomial is the empty vector; otherwise the leading coefficient is
// nonzero.  Mixed-level operands are coerced up the tower.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <drinfeld/field_tower.hpp>

namespace drinfeld {

struct Poly {
    Level base = Level::Fq;
    std::vector<FieldElem> coeffs; // dense, low-to-high, trailing zeros trimmed
    friend bool operator==(const Poly&, const Poly&) = default;
};

inline bool poly_is_zero(const Poly& f) { return f.coeffs.empty(); }

// degree; -1 for the zero polynomial
inline std::int64_t deg(const Poly& f) {
    return (std::int64_t)f.coeffs.size() - 1;
}

inline void poly_trim(const FieldTower& tw, Poly& f) {
    while (!f.coeffs.empty() && tw.is_zero(f.coeffs.back())) f.coeffs.pop_back();
}

inline Poly poly_zero(Level base) { return Poly{base, {}}; }

inline Poly poly_from_coeffs(const FieldTower& tw, Level base,
                             std::vector<FieldElem> cs) {
    for (auto& c : cs)
        if (c.level != base) throw std::invalid_argument("poly coefficient at wrong level");
    Poly f{base, std::move(cs)};
    poly_trim(tw, f);
    return f;
}

// convenience: integer coefficients, low-to-high
inline Poly poly_from_ints(const FieldTower& tw, Level base,
                           const std::vector<std::int64_t>& cs) {
    std::vector<FieldElem> v;
    v.reserve(cs.size());
    for (auto n : cs) v.push_back(tw.from_int(base, n));
    return poly_from_coeffs(tw, base, std::move(v));
}

inline Poly poly_const(const FieldTower& tw, FieldElem c) {
    Poly f{c.level, {c}};
    poly_trim(tw, f);
    return f;
}

inline Poly poly_one(const FieldTower& tw, Level base) {
    return Poly{base, {tw.one(base)}};
}

// the variable T
inline Poly poly_T(const FieldTower& tw, Level base) {
    return Poly{base, {tw.zero(base), tw.one(base)}};
}

inline FieldElem poly_coeff(const FieldTower& tw, const Poly& f, std::int64_t i) {
    if (i < 0 || i >= (std::int64_t)f.coeffs.size()) return tw.zero(f.base);
    return f.coeffs[(std::size_t)i];
}

inline FieldElem poly_leading(const Poly& f) {
    if (f.coeffs.empty()) throw std::invalid_argument("leading coefficient of zero polynomial");
    return f.coeffs.back();
}

inline bool poly_is_monic(const FieldTower& tw, const Poly& f) {
    return !f.coeffs.empty() && tw.is_one(f.coeffs.back());
}

inline Poly poly_coerce(const FieldTower& tw, const Poly& f, Level target) {
    if (f.base == target) return f;
    Poly g{target, {}};
    g.coeffs.reserve(f.coeffs.size());
    for (auto c : f.coeffs) g.coeffs.push_back(tw.embed(c, target));
    return g;
}

namespace detail {
// promote both operands to the higher of the two levels
inline Level common_level(Level a, Level b) {
    auto rank = [](Level l) { return l == Level::Fp ? 0 : l == Level::Fq ? 1 : 2; };
    return rank(a) >= rank(b) ? a : b;
}
} // namespace detail

inline Poly poly_add(const FieldTower& tw, const Poly& a0, const Poly& b0) {
    Level L = detail::common_level(a0.base, b0.base);
    Poly a = poly_coerce(tw, a0, L), b = poly_coerce(tw, b0, L);
    if (a.coeffs.size() < b.coeffs.size()) std::swap(a, b);
    for (std::size_t i = 0; i < b.coeffs.size(); ++i)
        a.coeffs[i] = tw.add(a.coeffs[i], b.coeffs[i]);
    poly_trim(tw, a);
    return a;
}

inline Poly poly_neg(const FieldTower& tw, const Poly& f) {
    Poly g = f;
    for (auto& c : g.coeffs) c = tw.neg(c);
    return g;
}

inline Poly poly_sub(const FieldTower& tw, const Poly& a, const Poly& b) {
    return poly_add(tw, a, poly_neg(tw, b));
}

inline Poly poly_scale(const FieldTower& tw, const Poly& f0, FieldElem c) {
    Level L = detail::common_level(f0.base, c.level);
    Poly f = poly_coerce(tw, f0, L);
    FieldElem cc = tw.embed(c, L);
    for (auto& x : f.coeffs) x = tw.mul(x, cc);
    poly_trim(tw, f);
    return f;
}

inline Poly poly_mul(const FieldTower& tw, const Poly& a0, const Poly& b0) {
    Level L = detail::common_level(a0.base, b0.base);
    Poly a = poly_coerce(tw, a0, L), b = poly_coerce(tw, b0, L);
    if (poly_is_zero(a) || poly_is_zero(b)) return poly_zero(L);
    // drive the outer loop with the sparser operand; q-power stretches
    // produce long vectors holding a handful of monomials
    auto nnz = [&](const Poly& f) {
        std::size_t n = 0;
        for (auto c : f.coeffs)
            if (!tw.is_zero(c)) ++n;
        return n;
    };
    if (nnz(b) < nnz(a)) std::swap(a, b);
    Poly c{L, std::vector<FieldElem>(a.coeffs.size() + b.coeffs.size() - 1, tw.zero(L))};
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (tw.is_zero(a.coeffs[i])) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            c.coeffs[i + j] = tw.add(c.coeffs[i + j], tw.mul(a.coeffs[i], b.coeffs[j]));
    }
    poly_trim(tw, c);
    return c;
}

// multiply by T^k
inline Poly poly_shift(const FieldTower& tw, const Poly& f, std::int64_t k) {
    if (poly_is_zero(f) || k == 0) return f;
    if (k < 0) throw std::invalid_argument("negative shift");
    Poly g{f.base, std::vector<FieldElem>((std::size_t)k, tw.zero(f.base))};
    g.coeffs.insert(g.coeffs.end(), f.coeffs.begin(), f.coeffs.end());
    return g;
}

inline std::pair<Poly, Poly> poly_divmod(const FieldTower& tw, const Poly& a0,
                                         const Poly& b0) {
    if (poly_is_zero(b0)) throw std::invalid_argument("division by zero polynomial");
    Level L = detail::common_level(a0.base, b0.base);
    Poly rem = poly_coerce(tw, a0, L), b = poly_coerce(tw, b0, L);
    Poly quot = poly_zero(L);
    if (deg(rem) >= deg(b))
        quot.coeffs.assign((std::size_t)(deg(rem) - deg(b) + 1), tw.zero(L));
    FieldElem lead_inv = tw.inv(b.coeffs.back());
    while (!poly_is_zero(rem) && deg(rem) >= deg(b)) {
        std::int64_t shift = deg(rem) - deg(b);
        FieldElem fac = tw.mul(rem.coeffs.back(), lead_inv);
        quot.coeffs[(std::size_t)shift] = fac;
        // rem -= fac * T^shift * b; the leading term cancels by construction
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
            auto& slot = rem.coeffs[(std::size_t)shift + j];
            slot = tw.sub(slot, tw.mul(fac, b.coeffs[j]));
        }
        poly_trim(tw, rem);
    }
    poly_trim(tw, quot);
    return {quot, rem};
}

inline Poly poly_mod(const FieldTower& tw, const Poly& a, const Poly& b) {
    return poly_divmod(tw, a, b).second;
}

inline Poly poly_monic(const FieldTower& tw, const Poly& f) {
    if (poly_is_zero(f)) return f;
    return poly_scale(tw, f, tw.inv(f.coeffs.back()));
}

// extended gcd: returns (g, s, t) with s*a + t*b = g, g monic (or zero)
struct PolyXgcd {
    Poly g, s, t;
};

inline PolyXgcd poly_ext_gcd(const FieldTower& tw, const Poly& a0, const Poly& b0) {
    Level L = detail::common_level(a0.base, b0.base);
    Poly r0 = poly_coerce(tw, a0, L), r1 = poly_coerce(tw, b0, L);
    Poly s0 = poly_one(tw, L), s1 = poly_zero(L);
    Poly t0 = poly_zero(L), t1 = poly_one(tw, L);
    while (!poly_is_zero(r1)) {
        auto [q, r2] = poly_divmod(tw, r0, r1);
        Poly s2 = poly_sub(tw, s0, poly_mul(tw, q, s1));
        Poly t2 = poly_sub(tw, t0, poly_mul(tw, q, t1));
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (!poly_is_zero(r0)) {
        FieldElem u = tw.inv(r0.coeffs.back());
        r0 = poly_scale(tw, r0, u);
        s0 = poly_scale(tw, s0, u);
        t0 = poly_scale(tw, t0, u);
    }
    return {std::move(r0), std::move(s0), std::move(t0)};
}

// monic gcd; gcd(0,0) = 0
inline Poly poly_gcd(const FieldTower& tw, Poly a, Poly b) {
    Level L = detail::common_level(a.base, b.base);
    a = poly_coerce(tw, a, L);
    b = poly_coerce(tw, b, L);
    while (!poly_is_zero(b)) {
        Poly r = poly_mod(tw, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(tw, a);
}

// evaluate at a point living at the polynomial's level or above
inline FieldElem poly_eval(const FieldTower& tw, const Poly& f, FieldElem x) {
    Level L = detail::common_level(f.base, x.level);
    FieldElem xx = tw.embed(x, L);
    FieldElem acc = tw.zero(L);
    for (std::size_t i = f.coeffs.size(); i-- > 0;)
        acc = tw.add(tw.mul(acc, xx), tw.embed(f.coeffs[i], L));
    return acc;
}

inline Poly poly_pow_mod(const FieldTower& tw, Poly base, std::int64_t n,
                         const Poly& mod) {
    if (n < 0) throw std::invalid_argument("negative exponent");
    Poly acc = poly_mod(tw, poly_one(tw, base.base), mod);
    base = poly_mod(tw, base, mod);
    while (n > 0) {
        if (n & 1) acc = poly_mod(tw, poly_mul(tw, acc, base), mod);
        base = poly_mod(tw, poly_mul(tw, base, base), mod);
        n >>= 1;
    }
    return acc;
}

// Irreducibility over the coefficient field of f (size Q = tw.size(f.base)):
// f of degree n is irreducible iff T^{Q^n} = T (mod f) and for every prime
// divisor d of n, gcd(T^{Q^{n/d}} - T mod f, f) = 1.  The iterated Q-power
// T^{Q^k} mod f is built one Q-power step at a time.
inline bool is_irreducible(const FieldTower& tw, const Poly& f) {
    if (poly_is_zero(f)) throw std::invalid_argument("is_irreducible: zero polynomial");
    std::int64_t n = deg(f);
    if (n == 0) return false; // units are not irreducible
    if (n == 1) return true;
    const std::int64_t Q = tw.size(f.base);
    const Poly fm = poly_monic(tw, f);
    const Poly t = poly_T(tw, f.base);

    // qpow[k] = T^{Q^k} mod f for the k we need
    auto step = [&](const Poly& g) { return poly_pow_mod(tw, g, Q, fm); };

    std::vector<std::int64_t> prime_divs;
    std::int64_t m = n;
    for (std::int64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_divs.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_divs.push_back(m);

    Poly cur = poly_mod(tw, t, fm);
    for (std::int64_t k = 1; k <= n; ++k) {
        cur = step(cur);
        // at k = n/d the gcd test must pass; at k = n the power must close up
        for (auto d : prime_divs)
            if (k == n / d) {
                Poly g = poly_gcd(tw, poly_sub(tw, cur, t), fm);
                if (deg(g) != 0) return false;
            }
    }
    return cur == poly_mod(tw, t, fm);
}

// coefficientwise sigma^i, sigma = q-power Frobenius of F_{q^r}/F_q; fixes T
inline Poly frobenius_poly(const FieldTower& tw, const Poly& f, std::int64_t i) {
    Poly g = f;
    for (auto& c : g.coeffs) c = tw.frobenius(c, i);
    return g;
}

// Norm and trace from O_H = F_{q^r}[T] down to A = F_q[T]: products/sums of
// the sigma^i-conjugates.  Both are Galois-invariant so the coefficients lie
// in F_q; that containment is checked, not assumed.
inline Poly poly_norm_OH(const FieldTower& tw, const Poly& f0) {
    Poly f = poly_coerce(tw, f0, Level::Fqr);
    Poly acc = poly_one(tw, Level::Fqr);
    for (std::int64_t i = 0; i < tw.r(); ++i)
        acc = poly_mul(tw, acc, frobenius_poly(tw, f, i));
    Poly out{Level::Fq, {}};
    out.coeffs.reserve(acc.coeffs.size());
    for (auto c : acc.coeffs) {
        auto down = tw.try_project(c, Level::Fq);
        if (!down) throw std::logic_error("norm left F_q[T]");
        out.coeffs.push_back(*down);
    }
    return out;
}

inline Poly poly_trace_OH(const FieldTower& tw, const Poly& f0) {
    Poly f = poly_coerce(tw, f0, Level::Fqr);
    Poly acc = poly_zero(Level::Fqr);
    for (std::int64_t i = 0; i < tw.r(); ++i)
        acc = poly_add(tw, acc, frobenius_poly(tw, f, i));
    Poly out{Level::Fq, {}};
    out.coeffs.reserve(acc.coeffs.size());
    for (auto c : acc.coeffs) {
        auto down = tw.try_project(c, Level::Fq);
        if (!down) throw std::logic_error("trace left F_q[T]");
        out.coeffs.push_back(*down);
    }
    return out;
}

// monic irreducible generator of a prime ideal of A = F_q[T]
struct PrimeIdeal {
    Poly pi;

    PrimeIdeal(const FieldTower& tw, Poly gen) : pi(std::move(gen)) {
        if (pi.base != Level::Fq) throw std::invalid_argument("prime must live in F_q[T]");
        if (!poly_is_monic(tw, pi)) throw std::invalid_argument("prime generator must be monic");
        if (!is_irreducible(tw, pi)) throw std::invalid_argument("prime generator must be irreducible");
    }

    std::int64_t degree() const { return deg(pi); }
};

} // namespace drinfeld
