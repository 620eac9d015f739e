#pragma once

// Exact rational numbers for valuations.  Denominators stay tiny (they divide
// a ramification index), numerators are valuation orders, so int64 is plenty;
// intermediate products go through __int128 to be safe.  Positive infinity is
// a distinguished state (the valuation of 0), never a sentinel numerator.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace drinfeld {

class Rat {
public:
    Rat() : num_(0), den_(1), inf_(false) {}
    Rat(std::int64_t n) : num_(n), den_(1), inf_(false) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d), inf_(false) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        reduce();
    }

    static Rat infinity() {
        Rat r;
        r.inf_ = true;
        return r;
    }

    bool is_infinite() const { return inf_; }
    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        if (a.inf_) return infinity();
        if (b.inf_) throw std::domain_error("Rat: infinity on the right of -");
        return from128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                       (__int128)a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) return infinity();
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.inf_) throw std::domain_error("Rat: division by infinity");
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        if (a.inf_) return infinity();
        return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }

    friend bool operator==(const Rat& a, const Rat& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    std::string str() const {
        if (inf_) return "inf";
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    std::int64_t num_, den_;
    bool inf_;

    void reduce() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    static Rat from128(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rat: overflow");
        Rat r;
        r.num_ = (std::int64_t)n;
        r.den_ = (std::int64_t)d;
        if (r.num_ == 0) r.den_ = 1;
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
};

} // namespace drinfeld
