#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace idemlin {

// Exact rational number on 64-bit integers.
//
// Invariants: den > 0 and gcd(|num|, den) == 1; zero is 0/1.
// Intermediate products are taken in 128-bit arithmetic and results are
// reduced before narrowing, so arithmetic either returns the exact value
// or throws std::overflow_error; it never wraps and never rounds.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        __int128 nn = n, dd = d;
        if (dd < 0) { nn = -nn; dd = -dd; }
        normalize_(nn, dd);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return Rational(n, d, raw_tag{});
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return Rational(n, d, raw_tag{});
    }
    Rational operator-() const {
        Rational r;
        r.num_ = checked_(-(__int128)num_);
        r.den_ = den_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    struct raw_tag {};
    Rational(__int128 n, __int128 d, raw_tag) { normalize_(n, d); }

    static std::int64_t checked_(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("Rational: overflow");
        return (std::int64_t)v;
    }

    void normalize_(__int128 n, __int128 d) {
        // d > 0 by construction everywhere this is called with d from a
        // product of positive denominators; sign of n carries the sign.
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128_(a, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = checked_(n);
        den_ = checked_(d);
    }

    static __int128 gcd128_(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace idemlin
