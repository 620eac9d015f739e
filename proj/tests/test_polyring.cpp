#include <catch2/catch_amalgamated.hpp>

#include <drinfeld/poly.hpp>

#include "test_util.hpp"

using namespace drinfeld;

namespace {

Poly random_poly(const FieldTower& tw, Level base, std::int64_t max_deg,
                 testutil::Rng& rng) {
    std::vector<FieldElem> cs;
    std::int64_t d = (std::int64_t)rng.below((std::uint64_t)max_deg + 1);
    for (std::int64_t i = 0; i <= d; ++i)
        cs.push_back(tw.element(base, (std::int64_t)rng.below((std::uint64_t)tw.size(base))));
    return poly_from_coeffs(tw, base, std::move(cs));
}

// trial division by every monic factor candidate of degree <= deg(f)/2
bool brute_irreducible(const FieldTower& tw, const Poly& f) {
    std::int64_t n = deg(f);
    if (n <= 0) return false;
    if (n == 1) return true;
    std::int64_t Q = tw.size(f.base);
    for (std::int64_t d = 1; 2 * d <= n; ++d) {
        std::int64_t total = 1;
        for (std::int64_t i = 0; i < d; ++i) total *= Q;
        for (std::int64_t code = 0; code < total; ++code) {
            std::vector<FieldElem> cs;
            std::int64_t c = code;
            for (std::int64_t i = 0; i < d; ++i) {
                cs.push_back(tw.element(f.base, c % Q));
                c /= Q;
            }
            cs.push_back(tw.one(f.base));
            Poly g = poly_from_coeffs(tw, f.base, std::move(cs));
            if (poly_is_zero(poly_mod(tw, f, g))) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("polynomial arithmetic basics", "[polyring]") {
    auto tw = FieldTower::build({7, 1, 3});

    SECTION("product and gcd hand checks") {
        auto tw3 = FieldTower::build({3, 1, 3});
        // (T+1)(T-1) = T^2 - 1 over F_3, i.e. coefficients [2,0,1]
        Poly a = poly_from_ints(tw3, Level::Fq, {1, 1});
        Poly b = poly_from_ints(tw3, Level::Fq, {-1, 1});
        CHECK(poly_mul(tw3, a, b) == poly_from_ints(tw3, Level::Fq, {2, 0, 1}));

        // gcd(T^2-1, T-1) = T-1 over F_7
        Poly f = poly_from_ints(tw, Level::Fq, {-1, 0, 1});
        Poly g = poly_from_ints(tw, Level::Fq, {-1, 1});
        CHECK(poly_gcd(tw, f, g) == poly_from_ints(tw, Level::Fq, {6, 1}));
    }

    SECTION("divmod contract") {
        testutil::Rng rng(314);
        for (int t = 0; t < 200; ++t) {
            Poly a = random_poly(tw, Level::Fq, 8, rng);
            Poly b = random_poly(tw, Level::Fq, 5, rng);
            if (poly_is_zero(b)) continue;
            auto [q, r] = poly_divmod(tw, a, b);
            CHECK(poly_add(tw, poly_mul(tw, q, b), r) == a);
            CHECK(deg(r) < deg(b));
        }
        CHECK_THROWS_AS(poly_divmod(tw, poly_T(tw, Level::Fq), poly_zero(Level::Fq)),
                        std::invalid_argument);
    }

    SECTION("ring axioms and degree additivity") {
        testutil::Rng rng(2718);
        for (int t = 0; t < 150; ++t) {
            Poly a = random_poly(tw, Level::Fqr, 6, rng);
            Poly b = random_poly(tw, Level::Fqr, 6, rng);
            Poly c = random_poly(tw, Level::Fqr, 6, rng);
            CHECK(poly_mul(tw, a, poly_add(tw, b, c)) ==
                  poly_add(tw, poly_mul(tw, a, b), poly_mul(tw, a, c)));
            CHECK(poly_mul(tw, poly_mul(tw, a, b), c) ==
                  poly_mul(tw, a, poly_mul(tw, b, c)));
            CHECK(poly_mul(tw, a, b) == poly_mul(tw, b, a));
            if (!poly_is_zero(a) && !poly_is_zero(b))
                CHECK(deg(poly_mul(tw, a, b)) == deg(a) + deg(b));
        }
    }

    SECTION("evaluation is a homomorphism") {
        testutil::Rng rng(5);
        for (int t = 0; t < 100; ++t) {
            Poly a = random_poly(tw, Level::Fq, 5, rng);
            Poly b = random_poly(tw, Level::Fq, 5, rng);
            FieldElem x = tw.element(Level::Fqr, (std::int64_t)rng.below(343));
            CHECK(poly_eval(tw, poly_mul(tw, a, b), x) ==
                  tw.mul(poly_eval(tw, a, x), poly_eval(tw, b, x)));
            CHECK(poly_eval(tw, poly_add(tw, a, b), x) ==
                  tw.add(poly_eval(tw, a, x), poly_eval(tw, b, x)));
        }
    }

    SECTION("mixed-level operands are coerced upward") {
        Poly over_q = poly_from_ints(tw, Level::Fq, {1, 1});
        Poly over_qr = poly_from_ints(tw, Level::Fqr, {0, 0, 1});
        Poly s = poly_mul(tw, over_q, over_qr);
        CHECK(s.base == Level::Fqr);
        CHECK(deg(s) == 3);
    }
}

TEST_CASE("irreducibility", "[polyring]") {
    SECTION("spot checks") {
        auto tw = FieldTower::build({7, 1, 3});
        CHECK(is_irreducible(tw, poly_T(tw, Level::Fq)));
        CHECK_FALSE(is_irreducible(tw, poly_from_ints(tw, Level::Fq, {0, 0, 1}))); // T^2
        auto tw3 = FieldTower::build({3, 1, 3});
        CHECK(is_irreducible(tw3, poly_from_ints(tw3, Level::Fq, {1, 0, 1}))); // T^2+1
        CHECK_THROWS_AS(is_irreducible(tw3, poly_zero(Level::Fq)), std::invalid_argument);
    }

    SECTION("agrees with trial division for every monic f, deg <= 4") {
        for (std::int64_t p : {3, 7}) {
            auto tw = FieldTower::build({p, 1, 2});
            for (std::int64_t n = 1; n <= 4; ++n) {
                std::int64_t total = 1;
                for (std::int64_t i = 0; i < n; ++i) total *= p;
                for (std::int64_t code = 0; code < total; ++code) {
                    std::vector<FieldElem> cs;
                    std::int64_t c = code;
                    for (std::int64_t i = 0; i < n; ++i) {
                        cs.push_back(tw.element(Level::Fq, c % p));
                        c /= p;
                    }
                    cs.push_back(tw.one(Level::Fq));
                    Poly f = poly_from_coeffs(tw, Level::Fq, std::move(cs));
                    INFO("p=" << p << " code=" << code << " deg=" << n);
                    CHECK(is_irreducible(tw, f) == brute_irreducible(tw, f));
                }
            }
        }
    }

    SECTION("closure property of the q-power map for an irreducible modulus") {
        auto tw = FieldTower::build({3, 1, 3});
        Poly f = poly_from_ints(tw, Level::Fq, {1, 2, 0, 1}); // T^3+2T+1, irreducible
        REQUIRE(is_irreducible(tw, f));
        Poly t = poly_T(tw, Level::Fq);
        Poly acc = t;
        for (int k = 0; k < 3; ++k) acc = poly_pow_mod(tw, acc, 3, f);
        CHECK(acc == poly_mod(tw, t, f)); // T^{q^deg} = T in the residue field
    }
}

TEST_CASE("coefficientwise Galois action", "[polyring]") {
    auto tw = FieldTower::build({3, 1, 3});
    testutil::Rng rng(11);

    SECTION("fixes F_q[T] and has order r") {
        for (int t = 0; t < 50; ++t) {
            Poly f = random_poly(tw, Level::Fq, 5, rng);
            CHECK(frobenius_poly(tw, poly_coerce(tw, f, Level::Fqr), 1) ==
                  poly_coerce(tw, f, Level::Fqr));
            Poly g = random_poly(tw, Level::Fqr, 5, rng);
            CHECK(frobenius_poly(tw, g, tw.r()) == g);
        }
    }

    SECTION("u*T maps to u^q*T") {
        FieldElem u = tw.element(Level::Fqr, 3); // the adjoined generator, not in F_3
        Poly f = poly_from_coeffs(tw, Level::Fqr, {tw.zero(Level::Fqr), u});
        Poly g = frobenius_poly(tw, f, 1);
        CHECK(g.coeffs[1] == tw.pow(u, 3));
        CHECK_FALSE(g == f);
    }

    SECTION("ring homomorphism commuting with evaluation") {
        for (int t = 0; t < 50; ++t) {
            Poly a = random_poly(tw, Level::Fqr, 5, rng);
            Poly b = random_poly(tw, Level::Fqr, 5, rng);
            CHECK(frobenius_poly(tw, poly_mul(tw, a, b), 1) ==
                  poly_mul(tw, frobenius_poly(tw, a, 1), frobenius_poly(tw, b, 1)));
            CHECK(frobenius_poly(tw, poly_add(tw, a, b), 1) ==
                  poly_add(tw, frobenius_poly(tw, a, 1), frobenius_poly(tw, b, 1)));
            // sigma(f(x)) = (sigma f)(sigma x); at sigma-fixed x this says
            // evaluation commutes with the action
            FieldElem x = tw.element(Level::Fqr, (std::int64_t)rng.below(27));
            CHECK(tw.frobenius(poly_eval(tw, a, x), 1) ==
                  poly_eval(tw, frobenius_poly(tw, a, 1), tw.frobenius(x, 1)));
            FieldElem fixed = tw.embed(tw.element(Level::Fq, (std::int64_t)rng.below(3)), Level::Fqr);
            CHECK(poly_eval(tw, frobenius_poly(tw, a, 1), fixed) ==
                  tw.frobenius(poly_eval(tw, a, fixed), 1));
        }
    }
}

TEST_CASE("norm and trace down to F_q[T]", "[polyring]") {
    auto tw = FieldTower::build({3, 1, 3});
    testutil::Rng rng(23);

    SECTION("land in F_q[T] and satisfy the usual identities") {
        for (int t = 0; t < 60; ++t) {
            Poly f = random_poly(tw, Level::Fqr, 4, rng);
            Poly g = random_poly(tw, Level::Fqr, 4, rng);
            Poly nf = poly_norm_OH(tw, f);
            Poly tf = poly_trace_OH(tw, f);
            CHECK(nf.base == Level::Fq);
            CHECK(tf.base == Level::Fq);
            CHECK(poly_norm_OH(tw, poly_mul(tw, f, g)) ==
                  poly_mul(tw, nf, poly_norm_OH(tw, g)));
            CHECK(poly_trace_OH(tw, poly_add(tw, f, g)) ==
                  poly_add(tw, tf, poly_trace_OH(tw, g)));
        }
    }

    SECTION("on F_q[T] inputs: norm = f^r, trace = r*f") {
        Poly f = poly_from_ints(tw, Level::Fq, {1, 2, 1});
        Poly cube = poly_mul(tw, f, poly_mul(tw, f, f));
        CHECK(poly_norm_OH(tw, poly_coerce(tw, f, Level::Fqr)) == cube);
        // r = 3 = characteristic here, so the trace of a base element is 0
        CHECK(poly_is_zero(poly_trace_OH(tw, poly_coerce(tw, f, Level::Fqr))));
    }
}

TEST_CASE("prime ideal validation", "[polyring]") {
    auto tw = FieldTower::build({3, 1, 3});

    CHECK_NOTHROW(PrimeIdeal(tw, poly_T(tw, Level::Fq)));
    CHECK_NOTHROW(PrimeIdeal(tw, poly_from_ints(tw, Level::Fq, {1, 1})));
    CHECK_NOTHROW(PrimeIdeal(tw, poly_from_ints(tw, Level::Fq, {1, 0, 1})));
    CHECK(PrimeIdeal(tw, poly_from_ints(tw, Level::Fq, {1, 0, 1})).degree() == 2);

    CHECK_THROWS_AS(PrimeIdeal(tw, poly_from_ints(tw, Level::Fq, {0, 0, 1})),
                    std::invalid_argument); // T^2 reducible
    CHECK_THROWS_AS(PrimeIdeal(tw, poly_from_ints(tw, Level::Fq, {0, 2})),
                    std::invalid_argument); // 2T not monic
    CHECK_THROWS_AS(PrimeIdeal(tw, poly_T(tw, Level::Fqr)),
                    std::invalid_argument); // wrong level
}
