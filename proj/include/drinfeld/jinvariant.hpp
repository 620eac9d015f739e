#pragma once

// Basic J-invariants of rank-r Drinfeld modules.
//
// An exponent tuple (delta_1, ..., delta_{r-1}; delta_r) is *basic* when
//
//   (1)  sum_i delta_i (q^i - 1) = delta_r (q^r - 1)
//   (2)  0 <= delta_i <= (q^r - 1)/(q^{gcd(i,r)} - 1)   for 1 <= i <= r-1,
//        and gcd(delta_1, ..., delta_r) = 1
//
// and the invariant itself is the weight-0 monomial
//
//   J^{(delta)}(phi) = g_1^{delta_1} ... g_{r-1}^{delta_{r-1}} / Delta^{delta_r}.
//
// Valuations of J-values of CM modules are taken theta-adically in a
// LocalRing with T = theta^e, and reported as exact rationals ord = (theta
// order)/e.  The inequality checker works at the nu level (theta order
// itself) where the isomorphism-counting right-hand sides live.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include <drinfeld/drinfeld_module.hpp>
#include <drinfeld/field_tower.hpp>
#include <drinfeld/poly.hpp>
#include <drinfeld/rational.hpp>
#include <drinfeld/twisted.hpp>

namespace drinfeld {

using ValuationQ = Rat;

struct DeltaTuple {
    std::vector<std::int64_t> deltas; // delta_1 .. delta_{r-1}
    std::int64_t delta_r = 1;
    friend bool operator==(const DeltaTuple&, const DeltaTuple&) = default;
};

// sum over i = 1..r-1 only; delta_r is not part of "sum delta_i" anywhere
inline std::int64_t sum_deltas(const DeltaTuple& d) {
    std::int64_t s = 0;
    for (auto v : d.deltas) s += v;
    return s;
}

namespace detail {
inline std::int64_t ipow_checked(std::int64_t b, std::int64_t e) {
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        if (v > (std::int64_t)1 << 60) throw std::invalid_argument("exponent overflow");
        v *= b;
    }
    return v;
}
} // namespace detail

// independent re-check of conditions (1) and (2)
inline bool check_delta_conditions(std::int64_t q, std::int64_t r, const DeltaTuple& d) {
    if (q < 2 || r < 2 || (std::int64_t)d.deltas.size() != r - 1) return false;
    if (d.delta_r < 1) return false;
    std::int64_t qr1 = detail::ipow_checked(q, r) - 1;
    std::int64_t lhs = 0;
    std::int64_t g = d.delta_r;
    for (std::int64_t i = 1; i < r; ++i) {
        std::int64_t di = d.deltas[(std::size_t)(i - 1)];
        if (di < 0) return false;
        std::int64_t bound = qr1 / (detail::ipow_checked(q, std::gcd(i, r)) - 1);
        if (di > bound) return false;
        lhs += di * (detail::ipow_checked(q, i) - 1);
        g = std::gcd(g, di);
    }
    return lhs == d.delta_r * qr1 && g == 1;
}

// All basic tuples for (q, r), in lexicographic order of (delta_1, ...,
// delta_{r-1}).  delta_r is derived from condition (1).
inline std::vector<DeltaTuple> enumerate_delta_tuples(std::int64_t q, std::int64_t r,
                                                      std::int64_t cap = 100'000'000) {
    if (q < 2 || r < 2) throw std::invalid_argument("need q >= 2 and r >= 2");
    std::int64_t qr1 = detail::ipow_checked(q, r) - 1;

    std::vector<std::int64_t> bound((std::size_t)r, 0); // index i-1 for delta_i
    std::int64_t space = 1;
    for (std::int64_t i = 1; i < r; ++i) {
        bound[(std::size_t)(i - 1)] = qr1 / (detail::ipow_checked(q, std::gcd(i, r)) - 1);
        if (space > cap / (bound[(std::size_t)(i - 1)] + 1))
            throw std::invalid_argument("delta search space exceeds cap");
        space *= bound[(std::size_t)(i - 1)] + 1;
    }

    std::vector<DeltaTuple> out;
    std::vector<std::int64_t> cur((std::size_t)(r - 1), 0);
    // odometer over the box [0, bound_1] x ... x [0, bound_{r-1}]
    while (true) {
        std::int64_t s = 0;
        for (std::int64_t i = 1; i < r; ++i)
            s += cur[(std::size_t)(i - 1)] * (detail::ipow_checked(q, i) - 1);
        if (s > 0 && s % qr1 == 0) {
            DeltaTuple d{cur, s / qr1};
            std::int64_t g = d.delta_r;
            for (auto v : d.deltas) g = std::gcd(g, v);
            if (g == 1) out.push_back(std::move(d));
        }
        std::size_t k = cur.size();
        while (k > 0) {
            --k;
            if (cur[k] < bound[k]) {
                ++cur[k];
                std::fill(cur.begin() + (std::ptrdiff_t)k + 1, cur.end(), 0);
                break;
            }
            if (k == 0) return out;
        }
        if (cur.size() == 0) return out; // r = 1 cannot happen (guarded above)
    }
}

// ---------------------------------------------------------------------------
// evaluation

template <class R>
struct JFraction {
    typename R::Elem num, den;
};

template <class R>
JFraction<R> eval_J_fraction(const R& ring, const DrinfeldModule<R>& phi,
                             const DeltaTuple& d) {
    if ((std::int64_t)d.deltas.size() != phi.r - 1)
        throw std::invalid_argument("tuple length does not match rank");
    typename R::Elem num = ring.one();
    for (std::int64_t i = 1; i < phi.r; ++i)
        num = ring.mul(num, ring_pow(ring, phi.g(i), d.deltas[(std::size_t)(i - 1)]));
    return {std::move(num), ring_pow(ring, phi.delta(), d.delta_r)};
}

template <class R>
typename R::Elem eval_J(const R& ring, const DrinfeldModule<R>& phi, const DeltaTuple& d) {
    auto f = eval_J_fraction(ring, phi, d);
    return ring.mul(f.num, ring.inv(f.den)); // inv throws on non-units
}

// J^{(q^2+q+1, 0)} * (J^{(0, q^2+q+1)})^q = (J^{(1, q)})^{q^2+q+1}, checked
// exactly by cross-multiplied fractions (no division needed)
template <class R>
bool check_relation_r3(const R& ring, const DrinfeldModule<R>& phi) {
    if (phi.r != 3) throw std::invalid_argument("relation is specific to rank 3");
    std::int64_t q = ring.q();
    std::int64_t Q = q * q + q + 1;
    DeltaTuple t1{{Q, 0}, 1};
    DeltaTuple t2{{0, Q}, q + 1};
    DeltaTuple t3{{1, q}, 1};

    auto j1 = eval_J_fraction(ring, phi, t1);
    auto j2 = eval_J_fraction(ring, phi, t2);
    auto j3 = eval_J_fraction(ring, phi, t3);

    auto lhs_num = ring.mul(j1.num, ring_pow(ring, j2.num, q));
    auto lhs_den = ring.mul(j1.den, ring_pow(ring, j2.den, q));
    auto rhs_num = ring_pow(ring, j3.num, Q);
    auto rhs_den = ring_pow(ring, j3.den, Q);

    return ring.mul(lhs_num, rhs_den) == ring.mul(rhs_num, lhs_den);
}

// ---------------------------------------------------------------------------
// valuations

// ord(x) = (theta-adic order)/e; +infinity for x = 0 at ring precision
inline ValuationQ theta_valuation(const LocalRing& ring, const LocalRing::Elem& x) {
    auto ord = ring.theta_order(x);
    if (!ord) return Rat::infinity();
    return Rat(*ord, ring.e());
}

// ord of the J-value of a module over a local ring (normalized: Delta a unit)
inline ValuationQ valuation_of_J(const LocalRing& ring, const DrinfeldModule<LocalRing>& phi,
                                 const DeltaTuple& d) {
    return theta_valuation(ring, eval_J(ring, phi, d));
}

inline std::int64_t iso_count_mod(const LocalRing& ring, const DrinfeldModule<LocalRing>& phi,
                                  const DrinfeldModule<LocalRing>& psi, std::int64_t n) {
    return (std::int64_t)iso_scalars(ring, phi, psi, n).size();
}

// ---------------------------------------------------------------------------
// the section-3 inequalities at the nu level (theta order, not divided by e)

struct JestReport {
    Rat lhs;                        // nu(J(phi) - J(psi)); infinity iff phi == psi
    bool lhs_is_lower_bound = false; // difference vanished within precision:
                                     // lhs holds ring.N() and nu >= lhs
    Rat rhs;                        // [sum delta] * (sum iso counts)/(q^r - 1)
    bool used_delta_factor = false; // true when psi = T + tau^r
    std::optional<Rat> refined_rhs; // sparse psi = T + tau^j + tau^r
    bool refined_holds = true;
    std::vector<std::int64_t> iso_counts; // levels 1..N
    bool rhs_is_partial_sum = false;      // iso count at level N still nonzero
    bool holds = false;
};

// LHS = nu(J(phi,d) - J(psi,d)), RHS = (1/(q^r-1)) sum_{n<=N} #Iso(phi,psi,n),
// with the extra factor sum(delta_i) when psi is T + tau^r.  Both modules must
// be normalized (Delta = 1).  Throws when the truncation cannot certify the
// result: the iso sum has not stabilized against a finite LHS, or the LHS
// vanished within precision and the precision is below the RHS.
inline JestReport check_jest_bound(const LocalRing& ring,
                                   const DrinfeldModule<LocalRing>& phi,
                                   const DrinfeldModule<LocalRing>& psi,
                                   const DeltaTuple& d, std::int64_t N) {
    if (N < 1 || N > ring.N())
        throw std::invalid_argument("level range outside ring precision");
    if (!(phi.delta() == ring.one()) || !(psi.delta() == ring.one()))
        throw std::invalid_argument("check_jest_bound expects normalized modules");
    if (phi.r != psi.r) throw std::invalid_argument("rank mismatch");

    JestReport rep;
    std::int64_t qr1 = detail::ipow_checked(ring.q(), phi.r) - 1;

    for (std::int64_t n = 1; n <= N; ++n)
        rep.iso_counts.push_back(iso_count_mod(ring, phi, psi, n));
    std::int64_t iso_sum = 0;
    for (auto c : rep.iso_counts) iso_sum += c;
    rep.rhs_is_partial_sum = rep.iso_counts.back() > 0;

    // shape of psi decides which constant multiplies the iso sum
    bool psi_trivial = true;
    std::int64_t sparse_j = 0, nonzero_gs = 0;
    for (std::int64_t i = 1; i < psi.r; ++i) {
        if (!ring.is_zero(psi.g(i))) {
            psi_trivial = false;
            ++nonzero_gs;
            if (psi.g(i) == ring.one()) sparse_j = i;
        }
    }
    rep.used_delta_factor = psi_trivial;
    rep.rhs = Rat(iso_sum, qr1);
    if (psi_trivial) rep.rhs = rep.rhs * Rat(sum_deltas(d));
    if (!psi_trivial && nonzero_gs == 1 && sparse_j != 0) {
        std::int64_t other = sum_deltas(d) - d.deltas[(std::size_t)(sparse_j - 1)];
        std::int64_t g = std::gcd(qr1, detail::ipow_checked(ring.q(), sparse_j) - 1);
        rep.refined_rhs = Rat(other, g) * Rat(iso_sum);
    }

    // LHS at the nu level: theta order of the J difference
    auto diff = ring.sub(eval_J(ring, phi, d), eval_J(ring, psi, d));
    bool identical = phi.phiT == psi.phiT;
    auto ord = ring.theta_order(diff);
    if (ord) {
        rep.lhs = Rat(*ord);
    } else if (identical) {
        rep.lhs = Rat::infinity(); // genuinely equal, not a truncation artifact
    } else {
        rep.lhs = Rat(ring.N());
        rep.lhs_is_lower_bound = true;
    }

    if (!rep.lhs.is_infinite()) {
        if (rep.rhs_is_partial_sum && !rep.lhs_is_lower_bound)
            throw std::invalid_argument(
                "iso sum not stabilized at level N against a finite LHS; raise N");
        if (rep.lhs_is_lower_bound && (rep.lhs < rep.rhs || rep.rhs_is_partial_sum))
            throw std::invalid_argument(
                "precision too small: J difference vanished below the certified bound");
    }

    rep.holds = rep.lhs.is_infinite() || !(rep.lhs < rep.rhs);
    if (rep.refined_rhs)
        rep.refined_holds = rep.lhs.is_infinite() || !(rep.lhs < *rep.refined_rhs);
    return rep;
}

} // namespace drinfeld
