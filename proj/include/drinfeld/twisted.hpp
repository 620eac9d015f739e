#pragma once

// The skew polynomial ring L{tau} with tau*a = a^q*tau, over several exact
// coefficient rings:
//
//   TowerFieldRing  a tower level (F_q or F_{q^r}) with a chosen image of T
//   PolyRing        F_q[T] or O_H = F_{q^r}[T]
//   PolyModRing     F_q[T]/(m) or O_H/(m); a field when m is irreducible
//   LocalRing       R = F_{q^M}[theta]/(theta^N) with T = theta^e
//
// Each ring object exposes the same vocabulary (Elem, zero, one, add, sub,
// neg, mul, is_zero, pow_q, inv, gamma_T, from_fq), so TwistedPoly and the
// Drinfeld module layer are written once against that shape.  pow_q(x, i)
// is the true q-power map x^{q^i} of the ring, which is what conjugation by
// tau^i does to a coefficient.
//
// A LocalRing builds its own field tower for the residue field F_{q^M}.
// Elements of the shared subfield F_q are interchangeable between that tower
// and the main one: both towers pick their defining polynomials by the same
// deterministic rule over the same F_p, so Level::Fq means the same object.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <drinfeld/field_tower.hpp>
#include <drinfeld/poly.hpp>

namespace drinfeld {

// ---------------------------------------------------------------------------
// coefficient rings

class TowerFieldRing {
public:
    using Elem = FieldElem;

    TowerFieldRing(const FieldTower& tw, Level level, FieldElem t_image)
        : tw_(&tw), level_(level), t_image_(tw.embed(t_image, level)) {}

    const FieldTower& tower() const { return *tw_; }
    Level level() const { return level_; }
    std::int64_t q() const { return tw_->q(); }

    Elem zero() const { return tw_->zero(level_); }
    Elem one() const { return tw_->one(level_); }
    bool is_zero(const Elem& x) const { return tw_->is_zero(x); }
    Elem add(const Elem& a, const Elem& b) const { return tw_->add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return tw_->sub(a, b); }
    Elem neg(const Elem& a) const { return tw_->neg(a); }
    Elem mul(const Elem& a, const Elem& b) const { return tw_->mul(a, b); }
    Elem inv(const Elem& a) const { return tw_->inv(a); }
    Elem pow_q(const Elem& a, std::int64_t i) const { return tw_->frobenius(a, i); }
    Elem gamma_T() const { return t_image_; }
    Elem from_fq(FieldElem c) const { return tw_->embed(c, level_); }

private:
    const FieldTower* tw_;
    Level level_;
    FieldElem t_image_;
};

class PolyRing {
public:
    using Elem = Poly;

    PolyRing(const FieldTower& tw, Level level) : tw_(&tw), level_(level) {}

    const FieldTower& tower() const { return *tw_; }
    Level level() const { return level_; }
    std::int64_t q() const { return tw_->q(); }

    Elem zero() const { return poly_zero(level_); }
    Elem one() const { return poly_one(*tw_, level_); }
    bool is_zero(const Elem& x) const { return poly_is_zero(x); }
    Elem add(const Elem& a, const Elem& b) const { return poly_add(*tw_, a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return poly_sub(*tw_, a, b); }
    Elem neg(const Elem& a) const { return poly_neg(*tw_, a); }
    Elem mul(const Elem& a, const Elem& b) const { return poly_mul(*tw_, a, b); }

    // only unit (nonzero constant) polynomials are invertible
    Elem inv(const Elem& a) const {
        if (deg(a) != 0) throw std::invalid_argument("non-unit polynomial has no inverse");
        return poly_const(*tw_, tw_->inv(a.coeffs[0]));
    }

    // f^{q^i}: Frobenius on each coefficient and a q^i-fold exponent stretch
    Elem pow_q(const Elem& a, std::int64_t i) const {
        if (i == 0 || poly_is_zero(a)) return a;
        std::int64_t qi = 1;
        for (std::int64_t k = 0; k < i; ++k) qi *= tw_->q();
        Poly out{a.base, std::vector<FieldElem>(
                             (std::size_t)((std::int64_t)(a.coeffs.size() - 1) * qi + 1),
                             tw_->zero(a.base))};
        for (std::size_t j = 0; j < a.coeffs.size(); ++j)
            out.coeffs[j * (std::size_t)qi] = tw_->frobenius(a.coeffs[j], i);
        return out;
    }

    Elem gamma_T() const { return poly_T(*tw_, level_); }
    Elem from_fq(FieldElem c) const { return poly_const(*tw_, tw_->embed(c, level_)); }

private:
    const FieldTower* tw_;
    Level level_;
};

class PolyModRing {
public:
    using Elem = Poly; // reduced representative, deg < deg(modulus)

    PolyModRing(const FieldTower& tw, Poly modulus)
        : tw_(&tw), mod_(std::move(modulus)) {
        if (deg(mod_) < 1) throw std::invalid_argument("modulus must have degree >= 1");
    }

    const FieldTower& tower() const { return *tw_; }
    Level level() const { return mod_.base; }
    std::int64_t q() const { return tw_->q(); }
    const Poly& modulus() const { return mod_; }

    Elem reduce(const Poly& f) const { return poly_mod(*tw_, f, mod_); }

    Elem zero() const { return poly_zero(mod_.base); }
    Elem one() const { return reduce(poly_one(*tw_, mod_.base)); }
    bool is_zero(const Elem& x) const { return poly_is_zero(x); }
    Elem add(const Elem& a, const Elem& b) const { return reduce(poly_add(*tw_, a, b)); }
    Elem sub(const Elem& a, const Elem& b) const { return reduce(poly_sub(*tw_, a, b)); }
    Elem neg(const Elem& a) const { return reduce(poly_neg(*tw_, a)); }
    Elem mul(const Elem& a, const Elem& b) const { return reduce(poly_mul(*tw_, a, b)); }

    Elem inv(const Elem& a) const {
        auto x = poly_ext_gcd(*tw_, a, mod_);
        if (deg(x.g) != 0) throw std::invalid_argument("element not invertible mod modulus");
        return reduce(x.s);
    }

    // x^{q^i} mod m, one q-th power step at a time so exponents stay small
    Elem pow_q(const Elem& a, std::int64_t i) const {
        Elem cur = reduce(a);
        for (std::int64_t k = 0; k < i; ++k)
            cur = poly_pow_mod(*tw_, cur, tw_->q(), mod_);
        return cur;
    }

    Elem gamma_T() const { return reduce(poly_T(*tw_, mod_.base)); }
    Elem from_fq(FieldElem c) const { return reduce(poly_const(*tw_, tw_->embed(c, mod_.base))); }

private:
    const FieldTower* tw_;
    Poly mod_;
};

// F_{q^M}[theta]/(theta^N) with T = theta^e (unit 1).  Elements are always
// length-N coefficient vectors over the residue field, so vector equality is
// element equality.
class LocalRing {
public:
    using Elem = std::vector<FieldElem>;

    struct Params {
        std::int64_t p = 0;      // characteristic
        std::int64_t e_field = 1; // q = p^{e_field}
        std::int64_t r = 1;      // rank; the residue field must contain F_{q^r}
        std::int64_t M = 1;      // residue field F_{q^M}, r | M
        std::int64_t e = 1;      // ramification: T = theta^e
        std::int64_t N = 1;      // truncation: theta^N = 0
    };

    explicit LocalRing(const Params& pr, std::int64_t cap = FieldTower::kDefaultCap)
        : kt_(FieldTower::build({pr.p, pr.e_field, pr.M}, cap)),
          M_(pr.M), e_(pr.e), N_(pr.N), r_(pr.r) {
        if (pr.r < 1 || pr.M < 1 || pr.M % pr.r != 0)
            throw std::invalid_argument("residue degree M must be a positive multiple of r");
        if (pr.e < 1) throw std::invalid_argument("ramification index must be >= 1");
        if (pr.N < 1) throw std::invalid_argument("truncation level must be >= 1");
    }

    const FieldTower& residue() const { return kt_; }
    Level residue_level() const { return Level::Fqr; }
    std::int64_t q() const { return kt_.q(); }
    std::int64_t M() const { return M_; }
    std::int64_t e() const { return e_; }
    std::int64_t N() const { return N_; }
    std::int64_t r() const { return r_; }

    Elem zero() const { return Elem((std::size_t)N_, kt_.zero(Level::Fqr)); }
    Elem one() const {
        Elem x = zero();
        x[0] = kt_.one(Level::Fqr);
        return x;
    }

    bool is_zero(const Elem& x) const {
        for (auto c : x)
            if (!kt_.is_zero(c)) return false;
        return true;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem c = a;
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = kt_.add(c[j], b[j]);
        return c;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem c = a;
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = kt_.sub(c[j], b[j]);
        return c;
    }
    Elem neg(const Elem& a) const {
        Elem c = a;
        for (auto& x : c) x = kt_.neg(x);
        return c;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        Elem c = zero();
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (kt_.is_zero(a[i])) continue;
            for (std::size_t j = 0; j + i < b.size(); ++j)
                c[i + j] = kt_.add(c[i + j], kt_.mul(a[i], b[j]));
        }
        return c;
    }

    // units are exactly the elements with nonzero constant term
    Elem inv(const Elem& a) const {
        if (kt_.is_zero(a[0])) throw std::invalid_argument("non-unit in local ring");
        Elem b = zero();
        FieldElem u = kt_.inv(a[0]);
        b[0] = u;
        for (std::size_t k = 1; k < (std::size_t)N_; ++k) {
            FieldElem s = kt_.zero(Level::Fqr);
            for (std::size_t j = 1; j <= k; ++j) s = kt_.add(s, kt_.mul(a[j], b[k - j]));
            b[k] = kt_.neg(kt_.mul(u, s));
        }
        return b;
    }

    // x^{q^i} = sum_j a_j^{q^i} theta^{j q^i}; terms past theta^{N-1} vanish
    Elem pow_q(const Elem& a, std::int64_t i) const {
        if (i == 0) return a;
        std::int64_t qi = 1;
        for (std::int64_t k = 0; k < i; ++k) {
            qi *= kt_.q();
            if (qi >= N_ + 1) break; // larger powers only shorten the support
        }
        Elem c = zero();
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (kt_.is_zero(a[j])) continue;
            std::int64_t t = (std::int64_t)j * qi;
            if (j > 0 && (qi >= N_ + 1 || t >= N_)) continue;
            c[(std::size_t)t] = kt_.frobenius(a[j], i);
        }
        return c;
    }

    Elem gamma_T() const { return theta_pow(e_); }
    Elem from_fq(FieldElem c) const { return from_residue(kt_.embed(c, Level::Fqr)); }

    // helpers beyond the shared ring vocabulary -----------------------------

    Elem theta() const { return theta_pow(1); }

    Elem theta_pow(std::int64_t k) const {
        if (k < 0) throw std::invalid_argument("negative theta power");
        Elem x = zero();
        if (k < N_) x[(std::size_t)k] = kt_.one(Level::Fqr);
        return x;
    }

    Elem from_residue(FieldElem c) const {
        Elem x = zero();
        x[0] = kt_.embed(c, Level::Fqr);
        return x;
    }

    Elem scalar_mul(FieldElem c, const Elem& a) const {
        FieldElem cc = kt_.embed(c, Level::Fqr);
        Elem x = a;
        for (auto& v : x) v = kt_.mul(v, cc);
        return x;
    }

    // build sum c_j theta^j from residue-field coefficients, low-to-high
    Elem from_theta_coeffs(const std::vector<FieldElem>& cs) const {
        if ((std::int64_t)cs.size() > N_)
            throw std::invalid_argument("theta expansion longer than truncation");
        Elem x = zero();
        for (std::size_t j = 0; j < cs.size(); ++j) x[j] = kt_.embed(cs[j], Level::Fqr);
        return x;
    }

    // theta-adic order; nullopt for 0 (order >= N is indistinguishable from 0)
    std::optional<std::int64_t> theta_order(const Elem& x) const {
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!kt_.is_zero(x[j])) return (std::int64_t)j;
        return std::nullopt;
    }

    bool congruent(const Elem& a, const Elem& b, std::int64_t n) const {
        if (n < 0 || n > N_) throw std::invalid_argument("congruence level outside truncation");
        for (std::size_t j = 0; j < (std::size_t)n; ++j)
            if (!(a[j] == b[j])) return false;
        return true;
    }

    // image in R/theta^n R, re-expressed inside this ring (higher terms zeroed)
    Elem truncate(const Elem& a, std::int64_t n) const {
        if (n < 1 || n > N_) throw std::invalid_argument("truncation level outside ring");
        Elem x = a;
        for (std::size_t j = (std::size_t)n; j < x.size(); ++j) x[j] = kt_.zero(Level::Fqr);
        return x;
    }

private:
    FieldTower kt_;
    std::int64_t M_, e_, N_, r_;
};

// square-and-multiply power of a ring element, n >= 0
template <class R>
typename R::Elem ring_pow(const R& ring, typename R::Elem x, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("negative exponent");
    typename R::Elem acc = ring.one();
    while (n > 0) {
        if (n & 1) acc = ring.mul(acc, x);
        x = ring.mul(x, x);
        n >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// twisted polynomials

template <class R>
struct TwistedPoly {
    std::vector<typename R::Elem> coeffs; // index i = coefficient of tau^i
    friend bool operator==(const TwistedPoly&, const TwistedPoly&) = default;
};

template <class R>
void t_trim(const R& ring, TwistedPoly<R>& u) {
    while (!u.coeffs.empty() && ring.is_zero(u.coeffs.back())) u.coeffs.pop_back();
}

template <class R>
bool t_is_zero(const TwistedPoly<R>& u) {
    return u.coeffs.empty();
}

// degree in tau; -1 for zero
template <class R>
std::int64_t deg_tau(const TwistedPoly<R>& u) {
    return (std::int64_t)u.coeffs.size() - 1;
}

template <class R>
TwistedPoly<R> t_zero(const R&) {
    return {};
}

template <class R>
TwistedPoly<R> t_const(const R& ring, typename R::Elem a) {
    TwistedPoly<R> u{{std::move(a)}};
    t_trim(ring, u);
    return u;
}

template <class R>
TwistedPoly<R> t_monomial(const R& ring, typename R::Elem a, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("negative tau power");
    if (ring.is_zero(a)) return {};
    TwistedPoly<R> u;
    u.coeffs.assign((std::size_t)k + 1, ring.zero());
    u.coeffs.back() = std::move(a);
    return u;
}

template <class R>
TwistedPoly<R> t_tau(const R& ring, std::int64_t k) {
    return t_monomial(ring, ring.one(), k);
}

template <class R>
TwistedPoly<R> t_from_coeffs(const R& ring, std::vector<typename R::Elem> cs) {
    TwistedPoly<R> u{std::move(cs)};
    t_trim(ring, u);
    return u;
}

template <class R>
typename R::Elem t_coeff(const R& ring, const TwistedPoly<R>& u, std::int64_t i) {
    if (i < 0 || i >= (std::int64_t)u.coeffs.size()) return ring.zero();
    return u.coeffs[(std::size_t)i];
}

template <class R>
TwistedPoly<R> t_add(const R& ring, const TwistedPoly<R>& a, const TwistedPoly<R>& b) {
    TwistedPoly<R> c = a.coeffs.size() >= b.coeffs.size() ? a : b;
    const TwistedPoly<R>& small = a.coeffs.size() >= b.coeffs.size() ? b : a;
    for (std::size_t i = 0; i < small.coeffs.size(); ++i)
        c.coeffs[i] = ring.add(c.coeffs[i], small.coeffs[i]);
    t_trim(ring, c);
    return c;
}

template <class R>
TwistedPoly<R> t_neg(const R& ring, const TwistedPoly<R>& a) {
    TwistedPoly<R> c = a;
    for (auto& x : c.coeffs) x = ring.neg(x);
    return c;
}

template <class R>
TwistedPoly<R> t_sub(const R& ring, const TwistedPoly<R>& a, const TwistedPoly<R>& b) {
    return t_add(ring, a, t_neg(ring, b));
}

// (a tau^i)(b tau^j) = a b^{q^i} tau^{i+j}, extended bilinearly
template <class R>
TwistedPoly<R> tmul(const R& ring, const TwistedPoly<R>& a, const TwistedPoly<R>& b) {
    if (t_is_zero(a) || t_is_zero(b)) return {};
    TwistedPoly<R> c;
    c.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, ring.zero());
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (ring.is_zero(a.coeffs[i])) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
            if (ring.is_zero(b.coeffs[j])) continue;
            auto term = ring.mul(a.coeffs[i], ring.pow_q(b.coeffs[j], (std::int64_t)i));
            c.coeffs[i + j] = ring.add(c.coeffs[i + j], std::move(term));
        }
    }
    t_trim(ring, c);
    return c;
}

template <class R>
TwistedPoly<R> t_pow(const R& ring, const TwistedPoly<R>& a, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("negative power");
    TwistedPoly<R> acc = t_const(ring, ring.one());
    for (std::int64_t k = 0; k < n; ++k) acc = tmul(ring, acc, a);
    return acc;
}

// smallest i with a nonzero tau^i coefficient
template <class R>
std::int64_t tau_valuation(const R& ring, const TwistedPoly<R>& u) {
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        if (!ring.is_zero(u.coeffs[i])) return (std::int64_t)i;
    throw std::invalid_argument("tau valuation of zero");
}

// ---------------------------------------------------------------------------
// coefficientwise reduction

// polynomial coefficients reduced into a quotient ring
inline TwistedPoly<PolyModRing> reduce_coeffs(const PolyModRing& target,
                                              const TwistedPoly<PolyRing>& u) {
    TwistedPoly<PolyModRing> v;
    v.coeffs.reserve(u.coeffs.size());
    for (const auto& c : u.coeffs) v.coeffs.push_back(target.reduce(c));
    t_trim(target, v);
    return v;
}

// local-ring coefficients reduced mod theta^n (result stays in the same ring)
inline TwistedPoly<LocalRing> reduce_coeffs(const LocalRing& ring,
                                            const TwistedPoly<LocalRing>& u,
                                            std::int64_t n) {
    TwistedPoly<LocalRing> v;
    v.coeffs.reserve(u.coeffs.size());
    for (const auto& c : u.coeffs) v.coeffs.push_back(ring.truncate(c, n));
    t_trim(ring, v);
    return v;
}

} // namespace drinfeld
