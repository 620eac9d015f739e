#pragma once

// Rank-r Drinfeld F_q[T]-modules over a coefficient ring R:
//
//   phi_T = gamma(T) + g_1 tau + ... + g_{r-1} tau^{r-1} + Delta tau^r
//
// with Delta != 0.  The module is determined by phi_T; phi_a for general
// a in A = F_q[T] is the unique ring-homomorphism extension.
//
// Morphism checks test only a = T.  That suffices: A is generated by T over
// F_q, constants gamma(c) with c in F_q commute with every twisted
// polynomial (c^{q^j} = c), and u phi_T = psi_T u gives u phi_{T^i} =
// psi_{T^i} u by induction, hence u phi_a = psi_a u for every a.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <drinfeld/field_tower.hpp>
#include <drinfeld/poly.hpp>
#include <drinfeld/twisted.hpp>

namespace drinfeld {

template <class R>
struct DrinfeldModule {
    std::int64_t r = 0;     // rank = deg_tau(phiT)
    TwistedPoly<R> phiT;

    const typename R::Elem& g(std::int64_t i) const {
        if (i < 1 || i > r) throw std::invalid_argument("coefficient index out of range");
        return phiT.coeffs[(std::size_t)i];
    }
    const typename R::Elem& delta() const { return phiT.coeffs[(std::size_t)r]; }
};

// phiT must carry constant term gamma(T) and a nonzero leading coefficient
template <class R>
DrinfeldModule<R> make_drinfeld(const R& ring, TwistedPoly<R> phiT) {
    t_trim(ring, phiT);
    std::int64_t r = deg_tau(phiT);
    if (r < 1) throw std::invalid_argument("rank must be at least 1");
    if (!(phiT.coeffs[0] == ring.gamma_T()))
        throw std::invalid_argument("constant term of phi_T must be the image of T");
    return {r, std::move(phiT)};
}

// build from (g_1, ..., g_{r-1}, Delta); the constant term is supplied by the ring
template <class R>
DrinfeldModule<R> make_drinfeld_g(const R& ring, std::vector<typename R::Elem> gs) {
    if (gs.empty()) throw std::invalid_argument("need at least the leading coefficient");
    if (ring.is_zero(gs.back())) throw std::invalid_argument("leading coefficient must be nonzero");
    std::vector<typename R::Elem> cs;
    cs.reserve(gs.size() + 1);
    cs.push_back(ring.gamma_T());
    for (auto& g : gs) cs.push_back(std::move(g));
    return make_drinfeld(ring, TwistedPoly<R>{std::move(cs)});
}

// phi_a by Horner over the twisted product; a must live in A = F_q[T]
template <class R>
TwistedPoly<R> phi_a(const R& ring, const DrinfeldModule<R>& phi, const Poly& a) {
    if (a.base == Level::Fqr)
        throw std::invalid_argument("phi_a expects a polynomial over F_q");
    if (poly_is_zero(a)) return {};
    TwistedPoly<R> acc;
    for (std::size_t i = a.coeffs.size(); i-- > 0;) {
        acc = tmul(ring, acc, phi.phiT);
        acc = t_add(ring, acc, t_const(ring, ring.from_fq(a.coeffs[i])));
    }
    return acc;
}

// u phi_T = psi_T u  (checking the generator T decides all of A; see header)
template <class R>
bool is_morphism(const R& ring, const TwistedPoly<R>& u, const DrinfeldModule<R>& phi,
                 const DrinfeldModule<R>& psi) {
    return tmul(ring, u, phi.phiT) == tmul(ring, psi.phiT, u);
}

// Supersingularity at a prime p = (pi): reduce mod pi, compute phi_pi in the
// residue ring, and compare the tau-valuation ("height times deg pi") with
// its maximum r*deg(pi).
inline bool is_supersingular(const FieldTower& tw, const DrinfeldModule<PolyRing>& phi,
                             const PrimeIdeal& p) {
    Level L = phi.phiT.coeffs[0].base;
    Poly pi = poly_coerce(tw, p.pi, L);
    PolyModRing res(tw, pi);
    // good reduction: Delta must be a unit mod pi (gcd check also covers
    // coefficients over F_{q^r}, where pi may split)
    if (deg(poly_gcd(tw, phi.delta(), pi)) != 0)
        throw std::invalid_argument("bad reduction: Delta is not a unit mod pi");
    TwistedPoly<PolyModRing> red = reduce_coeffs(res, phi.phiT);
    DrinfeldModule<PolyModRing> phibar = make_drinfeld(res, std::move(red));
    TwistedPoly<PolyModRing> img = phi_a(res, phibar, p.pi);
    std::int64_t ht = tau_valuation(res, img);
    return ht == phi.r * p.degree();
}

// e-fold power of a rank-1 theta-action: phi_T = (theta + tau)^e with
// theta^e = T.  The result must come out normalized (constant T, leading 1).
template <class R>
DrinfeldModule<R> cm_from_rank1(const R& ring, const TwistedPoly<R>& theta_image,
                                std::int64_t e) {
    if (e < 1) throw std::invalid_argument("e must be positive");
    if (deg_tau(theta_image) != 1)
        throw std::invalid_argument("theta action must have tau-degree 1");
    typename R::Elem th = theta_image.coeffs[0];
    if (!(ring_pow(ring, th, e) == ring.gamma_T()))
        throw std::invalid_argument("theta^e differs from the image of T");
    TwistedPoly<R> power = t_pow(ring, theta_image, e);
    if (deg_tau(power) != e || !(power.coeffs[0] == ring.gamma_T()) ||
        !(power.coeffs.back() == ring.one()))
        throw std::invalid_argument("rank-1 action does not normalize");
    return make_drinfeld(ring, std::move(power));
}

// Scalars c in mu_{q^r - 1} (= F_{q^r}^*, realized inside the residue field)
// with c^{q^i - 1} g_i = g_i' mod theta^n for 1 <= i <= r-1.  Constants with
// that property are exactly the isomorphisms between the truncations; both
// modules must be normalized (Delta = 1) so the rank-r condition on c is
// c^{q^r - 1} = 1, absorbed into the candidate set.
inline std::vector<FieldElem> iso_scalars(const LocalRing& ring,
                                          const DrinfeldModule<LocalRing>& phi,
                                          const DrinfeldModule<LocalRing>& psi,
                                          std::int64_t n) {
    if (n < 1) throw std::invalid_argument("truncation level must be >= 1");
    if (n > ring.N()) throw std::invalid_argument("truncation level exceeds ring precision");
    if (phi.r != psi.r) throw std::invalid_argument("rank mismatch");
    if (!(phi.delta() == ring.one()) || !(psi.delta() == ring.one()))
        throw std::invalid_argument("iso_scalars expects normalized modules (Delta = 1)");

    const FieldTower& kt = ring.residue();
    std::int64_t qr1 = 1;
    for (std::int64_t i = 0; i < phi.r; ++i) {
        qr1 *= ring.q();
        if (qr1 > kt.top_size()) throw std::invalid_argument("q^r exceeds residue field");
    }
    qr1 -= 1;

    std::vector<FieldElem> out;
    for (FieldElem c : kt.torsion(qr1)) {
        bool ok = true;
        std::int64_t qi = 1;
        for (std::int64_t i = 1; i < phi.r && ok; ++i) {
            qi *= ring.q();
            FieldElem ci = kt.pow(c, qi - 1);
            ok = ring.congruent(ring.scalar_mul(ci, phi.g(i)), psi.g(i), n);
        }
        if (ok) out.push_back(c);
    }
    return out;
}

} // namespace drinfeld
