#pragma once

// Deterministic finite field tower  F_p < F_q < F_{q^r},  q = p^e.
//
// Representation: an element is (level, idx) where idx packs the coordinate
// vector over F_p in base p.  The top field is built as a relative extension
// F_q[beta]/(g(beta)) over F_q = F_p[alpha]/(f(alpha)); the F_p-basis is
// { alpha^i beta^j : 0 <= i < e, 0 <= j < r } and digit (j*e + i) of idx is
// the coordinate of alpha^i beta^j.  The embedding F_q -> F_{q^r} is the
// j = 0 block, fixed once by construction.
//
// Defining polynomials f and g are the *smallest* monic irreducibles over
// their base in the following total order: a monic candidate
// x^k + c_{k-1} x^{k-1} + ... + c_0 is keyed by the integer
// sum_j idx(c_j) * |base|^j (high-degree coefficients most significant),
// and candidates are scanned in ascending key order.  This is fully
// deterministic and reproducible; it is not the Conway convention.
//
// Multiplication runs on discrete-log tables built once per tower, so every
// operation after construction is O(1) or O(#digits).  Construction refuses
// fields larger than the enumeration cap.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace drinfeld {

struct FieldSpec {
    std::int64_t p = 0; // characteristic, prime
    std::int64_t e = 1; // q = p^e
    std::int64_t r = 1; // top degree over F_q
};

enum class Level { Fp, Fq, Fqr };

struct FieldElem {
    Level level;
    std::uint32_t idx;
    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

inline const char* level_name(Level l) {
    switch (l) {
        case Level::Fp: return "Fp";
        case Level::Fq: return "Fq";
        default: return "Fqr";
    }
}

class FieldTower {
public:
    static constexpr std::int64_t kDefaultCap = 10'000'000;

    static FieldTower build(FieldSpec spec, std::int64_t cap = kDefaultCap) {
        return FieldTower(spec, cap);
    }

    std::int64_t p() const { return p_; }
    std::int64_t e() const { return e_; }
    std::int64_t r() const { return r_; }
    std::int64_t q() const { return q_; }
    std::int64_t top_size() const { return qr_; }
    std::int64_t cap() const { return cap_; }

    std::int64_t size(Level l) const {
        switch (l) {
            case Level::Fp: return p_;
            case Level::Fq: return q_;
            default: return qr_;
        }
    }
    // absolute degree over F_p
    std::int64_t degree(Level l) const {
        switch (l) {
            case Level::Fp: return 1;
            case Level::Fq: return e_;
            default: return e_ * r_;
        }
    }

    // Defining polynomial of F_q over F_p, low-to-high, entries in [0, p).
    const std::vector<std::int64_t>& fq_defining_poly() const { return fq_def_; }
    // Defining polynomial of F_{q^r} over F_q, low-to-high, entries are
    // F_q element indices.
    const std::vector<std::uint32_t>& fqr_defining_poly() const { return fqr_def_; }

    // ---- element construction ------------------------------------------

    FieldElem zero(Level l) const { return {l, 0}; }
    FieldElem one(Level l) const { return {l, 1}; }

    FieldElem element(Level l, std::int64_t idx) const {
        if (idx < 0 || idx >= size(l))
            throw std::invalid_argument("FieldTower: element index out of range");
        return {l, (std::uint32_t)idx};
    }

    // scalar n mod p, placed at the requested level
    FieldElem from_int(Level l, std::int64_t n) const {
        std::int64_t v = n % p_;
        if (v < 0) v += p_;
        return {l, (std::uint32_t)v};
    }

    FieldElem from_coords(Level l, const std::vector<std::int64_t>& coords) const {
        if ((std::int64_t)coords.size() != degree(l))
            throw std::invalid_argument("FieldTower: coordinate vector has wrong length");
        std::uint32_t idx = 0;
        for (std::size_t j = coords.size(); j-- > 0;) {
            std::int64_t v = coords[j] % p_;
            if (v < 0) v += p_;
            idx = (std::uint32_t)(idx * p_ + v);
        }
        return {l, idx};
    }

    std::vector<std::int64_t> coords(FieldElem x) const {
        std::vector<std::int64_t> out(degree(x.level));
        std::uint32_t v = x.idx;
        for (auto& c : out) {
            c = v % p_;
            v /= (std::uint32_t)p_;
        }
        return out;
    }

    // deterministic enumeration: index order 0, 1, ..., size-1
    std::vector<FieldElem> all_elements(Level l) const {
        if (size(l) > cap_)
            throw std::invalid_argument("FieldTower: enumeration cap exceeded");
        std::vector<FieldElem> out;
        out.reserve(size(l));
        for (std::int64_t i = 0; i < size(l); ++i) out.push_back({l, (std::uint32_t)i});
        return out;
    }

    // a fixed generator of the multiplicative group at this level
    FieldElem generator(Level l) const {
        if (l == Level::Fp) return {l, (std::uint32_t)fp_gen_};
        if (l == Level::Fq) return {l, fq_exp_[q_ > 2 ? 1 : 0]};
        return {l, top_exp_[qr_ > 2 ? 1 : 0]};
    }

    // ---- arithmetic ------------------------------------------------------

    bool is_zero(FieldElem x) const { return x.idx == 0; }
    bool is_one(FieldElem x) const { return x.idx == 1; }

    FieldElem add(FieldElem a, FieldElem b) const {
        check_same(a, b);
        if (a.level == Level::Fp) return {a.level, (std::uint32_t)((a.idx + b.idx) % p_)};
        return {a.level, digit_add(a.idx, b.idx, degree(a.level))};
    }

    FieldElem neg(FieldElem a) const {
        if (a.level == Level::Fp) return {a.level, (std::uint32_t)((p_ - a.idx) % p_)};
        return {a.level, digit_neg(a.idx, degree(a.level))};
    }

    FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        check_same(a, b);
        if (a.idx == 0 || b.idx == 0) return {a.level, 0};
        switch (a.level) {
            case Level::Fp:
                return {a.level, (std::uint32_t)((std::int64_t)a.idx * b.idx % p_)};
            case Level::Fq:
                return {a.level, fq_exp_[(fq_log_[a.idx] + fq_log_[b.idx]) % (std::uint64_t)(q_ - 1)]};
            default:
                return {a.level, top_exp_[(top_log_[a.idx] + top_log_[b.idx]) % (std::uint64_t)(qr_ - 1)]};
        }
    }

    FieldElem inv(FieldElem a) const {
        if (a.idx == 0) throw std::domain_error("FieldTower: inverse of zero");
        switch (a.level) {
            case Level::Fp: {
                std::int64_t v = pow_int_mod(a.idx, p_ - 2, p_);
                return {a.level, (std::uint32_t)v};
            }
            case Level::Fq:
                return {a.level, fq_exp_[(q_ - 1 - fq_log_[a.idx]) % (q_ - 1)]};
            default:
                return {a.level, top_exp_[(qr_ - 1 - top_log_[a.idx]) % (qr_ - 1)]};
        }
    }

    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    FieldElem pow(FieldElem a, std::int64_t n) const {
        if (a.idx == 0) {
            if (n <= 0) throw std::domain_error("FieldTower: 0 raised to non-positive power");
            return a;
        }
        std::int64_t ord = size(a.level) - 1;
        std::int64_t k = log_of(a);
        __int128 t = (__int128)k * (n % ord);
        std::int64_t kk = (std::int64_t)(t % ord);
        if (kk < 0) kk += ord;
        return exp_at(a.level, kk);
    }

    // x ^ (q^i); the Galois action of Gal(F_{q^r}/F_q).  Fixes Fp and Fq.
    FieldElem frobenius(FieldElem x, std::int64_t i) const {
        if (x.level != Level::Fqr || x.idx == 0) return x;
        std::int64_t ord = qr_ - 1;
        std::int64_t qi = pow_int_mod(q_ % ord, ((i % r_) + r_) % r_, ord);
        std::int64_t k = (std::int64_t)(((__int128)top_log_[x.idx] * qi) % ord);
        return {x.level, top_exp_[k]};
    }

    // Tr_{F_{q^r}/F_q}; lands in F_q (asserted by projection).
    FieldElem trace(FieldElem x) const {
        x = embed(x, Level::Fqr);
        FieldElem t = zero(Level::Fqr);
        for (std::int64_t i = 0; i < r_; ++i) t = add(t, frobenius(x, i));
        auto down = try_project(t, Level::Fq);
        if (!down) throw std::logic_error("FieldTower: trace left F_q");
        return *down;
    }

    // N_{F_{q^r}/F_q}; lands in F_q (asserted by projection).
    FieldElem norm(FieldElem x) const {
        x = embed(x, Level::Fqr);
        FieldElem t = one(Level::Fqr);
        for (std::int64_t i = 0; i < r_; ++i) t = mul(t, frobenius(x, i));
        auto down = try_project(t, Level::Fq);
        if (!down) throw std::logic_error("FieldTower: norm left F_q");
        return *down;
    }

    // ---- tower moves -----------------------------------------------------

    FieldElem embed(FieldElem x, Level target) const {
        if (x.level == target) return x;
        if (x.level == Level::Fp) {
            // F_p sits as the constant line of both extensions
            return {target, x.idx};
        }
        if (x.level == Level::Fq && target == Level::Fqr) {
            return {target, x.idx}; // block j = 0
        }
        throw std::invalid_argument("FieldTower: embed goes up the tower only");
    }

    std::optional<FieldElem> try_project(FieldElem x, Level target) const {
        if (x.level == target) return x;
        if (x.level == Level::Fqr && target == Level::Fq) {
            std::uint32_t block = x.idx % (std::uint32_t)q_;
            if (x.idx != block) return std::nullopt;
            return FieldElem{Level::Fq, block};
        }
        if (target == Level::Fp) {
            if (x.idx < (std::uint32_t)p_) return FieldElem{Level::Fp, x.idx};
            return std::nullopt;
        }
        throw std::invalid_argument("FieldTower: project goes down the tower only");
    }

    bool in_subfield(FieldElem x, Level sub) const {
        if (x.level == sub) return true;
        return try_project(x, sub).has_value();
    }

    // All c at the top level with c^d = 1; requires d | q^r - 1.
    std::vector<FieldElem> torsion(std::int64_t d) const {
        if (d <= 0 || (qr_ - 1) % d != 0)
            throw std::invalid_argument("FieldTower: torsion order must divide q^r - 1");
        std::int64_t step = (qr_ - 1) / d;
        std::vector<FieldElem> out;
        out.reserve(d);
        for (std::int64_t t = 0; t < d; ++t)
            out.push_back({Level::Fqr, top_exp_[t * step]});
        return out;
    }

    // discrete log with respect to generator(l); x must be nonzero
    std::int64_t log_of(FieldElem x) const {
        if (x.idx == 0) throw std::domain_error("FieldTower: log of zero");
        switch (x.level) {
            case Level::Fp: return fp_log_[x.idx];
            case Level::Fq: return fq_log_[x.idx];
            default: return top_log_[x.idx];
        }
    }

    FieldElem exp_at(Level l, std::int64_t k) const {
        switch (l) {
            case Level::Fp: return {l, (std::uint32_t)fp_exp_[k]};
            case Level::Fq: return {l, fq_exp_[k]};
            default: return {l, top_exp_[k]};
        }
    }

private:
    std::int64_t p_, e_, r_, q_, qr_, cap_;
    std::vector<std::int64_t> fq_def_;   // over F_p, low-to-high, monic
    std::vector<std::uint32_t> fqr_def_; // over F_q, low-to-high, monic

    std::int64_t fp_gen_ = 1;
    std::vector<std::int64_t> fp_exp_, fp_log_;
    std::vector<std::uint32_t> fq_exp_, fq_log_;
    std::vector<std::uint32_t> top_exp_, top_log_;

    FieldTower(FieldSpec spec, std::int64_t cap) : cap_(cap) {
        p_ = spec.p;
        e_ = spec.e;
        r_ = spec.r;
        if (p_ < 2 || !is_prime(p_))
            throw std::invalid_argument("FieldTower: p = " + std::to_string(p_) + " is not prime");
        if (e_ < 1 || r_ < 1)
            throw std::invalid_argument("FieldTower: e and r must be positive");
        q_ = checked_pow(p_, e_);
        qr_ = checked_pow(q_, r_);
        if (qr_ > cap_)
            throw std::invalid_argument("FieldTower: field size " + std::to_string(qr_) +
                                        " exceeds enumeration cap " + std::to_string(cap_));

        build_fp_tables();
        fq_def_ = smallest_irreducible_fp(e_);
        build_fq_tables();
        fqr_def_ = smallest_irreducible_fq(r_);
        build_top_tables();
    }

    void check_same(FieldElem a, FieldElem b) const {
        if (a.level != b.level)
            throw std::invalid_argument("FieldTower: mixed levels (embed first)");
    }

    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static std::int64_t checked_pow(std::int64_t b, std::int64_t k) {
        std::int64_t v = 1;
        for (std::int64_t i = 0; i < k; ++i) {
            if (v > (std::int64_t)1 << 40)
                throw std::invalid_argument("FieldTower: field size overflow");
            v *= b;
        }
        return v;
    }

    static std::int64_t pow_int_mod(std::int64_t b, std::int64_t k, std::int64_t m) {
        std::int64_t v = 1 % m;
        b %= m;
        while (k > 0) {
            if (k & 1) v = (std::int64_t)((__int128)v * b % m);
            b = (std::int64_t)((__int128)b * b % m);
            k >>= 1;
        }
        return v;
    }

    std::uint32_t digit_add(std::uint32_t a, std::uint32_t b, std::int64_t ndig) const {
        std::uint32_t out = 0, mul = 1;
        for (std::int64_t i = 0; i < ndig; ++i) {
            std::uint32_t da = a % p_, db = b % p_;
            a /= (std::uint32_t)p_;
            b /= (std::uint32_t)p_;
            out += ((da + db) % p_) * mul;
            mul *= (std::uint32_t)p_;
        }
        return out;
    }

    std::uint32_t digit_neg(std::uint32_t a, std::int64_t ndig) const {
        std::uint32_t out = 0, mul = 1;
        for (std::int64_t i = 0; i < ndig; ++i) {
            std::uint32_t da = a % p_;
            a /= (std::uint32_t)p_;
            out += ((p_ - da) % p_) * mul;
            mul *= (std::uint32_t)p_;
        }
        return out;
    }

    void build_fp_tables() {
        fp_exp_.assign(p_ - 1, 0);
        fp_log_.assign(p_, 0);
        for (std::int64_t g = 1; g < p_; ++g) {
            std::int64_t v = 1;
            bool ok = true;
            for (std::int64_t k = 0; k < p_ - 1; ++k) {
                fp_exp_[k] = v;
                if (v == 1 && k > 0) {
                    ok = false;
                    break;
                }
                fp_log_[v] = k;
                v = v * g % p_;
            }
            if (ok && v == 1) {
                fp_gen_ = g;
                return;
            }
        }
        throw std::logic_error("FieldTower: no generator mod p");
    }

    // ---- bootstrap F_q arithmetic on digit vectors over F_p --------------

    using FpVec = std::vector<std::int64_t>;

    FpVec fq_unpack(std::uint32_t idx) const {
        FpVec v(e_);
        for (auto& d : v) {
            d = idx % p_;
            idx /= (std::uint32_t)p_;
        }
        return v;
    }

    std::uint32_t fq_pack(const FpVec& v) const {
        std::uint32_t idx = 0;
        for (std::size_t j = v.size(); j-- > 0;) idx = (std::uint32_t)(idx * p_ + v[j]);
        return idx;
    }

    // product mod fq_def_, schoolbook; used only to build tables
    std::uint32_t fq_mul_slow(std::uint32_t a, std::uint32_t b) const {
        FpVec va = fq_unpack(a), vb = fq_unpack(b);
        FpVec prod(2 * e_ - 1, 0);
        for (std::int64_t i = 0; i < e_; ++i)
            for (std::int64_t j = 0; j < e_; ++j)
                prod[i + j] = (prod[i + j] + va[i] * vb[j]) % p_;
        for (std::int64_t d = 2 * e_ - 2; d >= e_; --d) {
            std::int64_t c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            for (std::int64_t j = 0; j < e_; ++j) {
                std::int64_t sub = c * fq_def_[j] % p_;
                prod[d - e_ + j] = ((prod[d - e_ + j] - sub) % p_ + p_) % p_;
            }
        }
        prod.resize(e_);
        return fq_pack(prod);
    }

    // Monic irreducibles over F_p by brute trial division (bootstrap only).
    bool fp_poly_irreducible(const FpVec& f) const {
        std::int64_t k = (std::int64_t)f.size() - 1;
        if (k <= 0) return false;
        if (k == 1) return true;
        // trial-divide by every monic of degree 1..k/2
        for (std::int64_t d = 1; 2 * d <= k; ++d) {
            std::int64_t count = 1;
            for (std::int64_t i = 0; i < d; ++i) count *= p_;
            for (std::int64_t v = 0; v < count; ++v) {
                FpVec g(d + 1);
                std::int64_t t = v;
                for (std::int64_t i = 0; i < d; ++i) {
                    g[i] = t % p_;
                    t /= p_;
                }
                g[d] = 1;
                if (fp_poly_divides(g, f)) return false;
            }
        }
        return true;
    }

    bool fp_poly_divides(const FpVec& g, FpVec f) const {
        std::int64_t dg = (std::int64_t)g.size() - 1;
        for (std::int64_t d = (std::int64_t)f.size() - 1; d >= dg; --d) {
            std::int64_t c = f[d];
            if (c == 0) continue;
            for (std::int64_t j = 0; j <= dg; ++j)
                f[d - dg + j] = ((f[d - dg + j] - c * g[j]) % p_ + p_) % p_;
        }
        for (auto c : f)
            if (c != 0) return false;
        return true;
    }

    std::vector<std::int64_t> smallest_irreducible_fp(std::int64_t k) const {
        std::int64_t count = 1;
        for (std::int64_t i = 0; i < k; ++i) count *= p_;
        for (std::int64_t v = 0; v < count; ++v) {
            FpVec f(k + 1);
            std::int64_t t = v;
            for (std::int64_t i = 0; i < k; ++i) {
                f[i] = t % p_;
                t /= p_;
            }
            f[k] = 1;
            if (fp_poly_irreducible(f)) return f;
        }
        throw std::logic_error("FieldTower: no irreducible found over F_p");
    }

    void build_fq_tables() {
        fq_exp_.assign(q_ - 1, 0);
        fq_log_.assign(q_, 0);
        if (e_ == 1) {
            // reuse the F_p tables
            for (std::int64_t k = 0; k < q_ - 1; ++k) fq_exp_[k] = (std::uint32_t)fp_exp_[k];
            for (std::int64_t v = 1; v < q_; ++v) fq_log_[v] = (std::uint32_t)fp_log_[v];
            return;
        }
        for (std::int64_t g = 1; g < q_; ++g) {
            std::uint32_t v = 1;
            bool ok = true;
            for (std::int64_t k = 0; k < q_ - 1; ++k) {
                if (v == 1 && k > 0) {
                    ok = false;
                    break;
                }
                fq_exp_[k] = v;
                fq_log_[v] = (std::uint32_t)k;
                v = fq_mul_slow(v, (std::uint32_t)g);
            }
            if (ok && v == 1) return;
        }
        throw std::logic_error("FieldTower: no generator of F_q found");
    }

    std::uint32_t fq_table_mul(std::uint32_t a, std::uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return fq_exp_[(fq_log_[a] + (std::uint64_t)fq_log_[b]) % (std::uint64_t)(q_ - 1)];
    }

    std::uint32_t fq_table_neg(std::uint32_t a) const { return digit_neg(a, e_); }

    // ---- bootstrap F_{q^r} arithmetic on F_q-coefficient vectors ---------

    using FqVec = std::vector<std::uint32_t>;

    FqVec top_unpack(std::uint32_t idx) const {
        FqVec v(r_);
        for (auto& c : v) {
            c = idx % (std::uint32_t)q_;
            idx /= (std::uint32_t)q_;
        }
        return v;
    }

    std::uint32_t top_pack(const FqVec& v) const {
        std::uint32_t idx = 0;
        for (std::size_t j = v.size(); j-- > 0;) idx = (std::uint32_t)(idx * q_ + v[j]);
        return idx;
    }

    std::uint32_t top_mul_slow(std::uint32_t a, std::uint32_t b) const {
        FqVec va = top_unpack(a), vb = top_unpack(b);
        FqVec prod(2 * r_ - 1, 0);
        for (std::int64_t i = 0; i < r_; ++i)
            for (std::int64_t j = 0; j < r_; ++j)
                prod[i + j] = digit_add(prod[i + j], fq_table_mul(va[i], vb[j]), e_);
        for (std::int64_t d = 2 * r_ - 2; d >= r_; --d) {
            std::uint32_t c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            for (std::int64_t j = 0; j < r_; ++j) {
                std::uint32_t sub = fq_table_mul(c, fqr_def_[j]);
                prod[d - r_ + j] = digit_add(prod[d - r_ + j], fq_table_neg(sub), e_);
            }
        }
        prod.resize(r_);
        return top_pack(prod);
    }

    bool fq_poly_divides(const FqVec& g, FqVec f) const {
        std::int64_t dg = (std::int64_t)g.size() - 1;
        for (std::int64_t d = (std::int64_t)f.size() - 1; d >= dg; --d) {
            std::uint32_t c = f[d];
            if (c == 0) continue;
            for (std::int64_t j = 0; j <= dg; ++j) {
                std::uint32_t sub = fq_table_mul(c, g[j]);
                f[d - dg + j] = digit_add(f[d - dg + j], fq_table_neg(sub), e_);
            }
        }
        for (auto c : f)
            if (c != 0) return false;
        return true;
    }

    bool fq_poly_irreducible(const FqVec& f) const {
        std::int64_t k = (std::int64_t)f.size() - 1;
        if (k <= 0) return false;
        if (k == 1) return true;
        for (std::int64_t d = 1; 2 * d <= k; ++d) {
            std::int64_t count = 1;
            for (std::int64_t i = 0; i < d; ++i) count *= q_;
            for (std::int64_t v = 0; v < count; ++v) {
                FqVec g(d + 1);
                std::int64_t t = v;
                for (std::int64_t i = 0; i < d; ++i) {
                    g[i] = (std::uint32_t)(t % q_);
                    t /= q_;
                }
                g[d] = 1;
                if (fq_poly_divides(g, f)) return false;
            }
        }
        return true;
    }

    std::vector<std::uint32_t> smallest_irreducible_fq(std::int64_t k) const {
        std::int64_t count = 1;
        for (std::int64_t i = 0; i < k; ++i) {
            if (count > cap_) throw std::invalid_argument("FieldTower: defining-poly search over cap");
            count *= q_;
        }
        for (std::int64_t v = 0; v < count; ++v) {
            FqVec f(k + 1);
            std::int64_t t = v;
            for (std::int64_t i = 0; i < k; ++i) {
                f[i] = (std::uint32_t)(t % q_);
                t /= q_;
            }
            f[k] = 1;
            if (fq_poly_irreducible(f)) return f;
        }
        throw std::logic_error("FieldTower: no irreducible found over F_q");
    }

    void build_top_tables() {
        top_exp_.assign(qr_ - 1, 0);
        top_log_.assign(qr_, 0);
        if (r_ == 1) {
            for (std::int64_t k = 0; k < q_ - 1; ++k) top_exp_[k] = fq_exp_[k];
            for (std::int64_t v = 1; v < q_; ++v) top_log_[v] = fq_log_[v];
            return;
        }
        for (std::int64_t g = 1; g < qr_; ++g) {
            std::uint32_t v = 1;
            bool ok = true;
            for (std::int64_t k = 0; k < qr_ - 1; ++k) {
                if (v == 1 && k > 0) {
                    ok = false;
                    break;
                }
                top_exp_[k] = v;
                top_log_[v] = (std::uint32_t)k;
                v = top_mul_slow(v, (std::uint32_t)g);
            }
            if (ok && v == 1) return;
        }
        throw std::logic_error("FieldTower: no generator of F_{q^r} found");
    }
};

} // namespace drinfeld
