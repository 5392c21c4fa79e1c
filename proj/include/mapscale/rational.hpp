#pragma once

#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mapscale {

/// Exact rational arithmetic over int64 with __int128 intermediates.
/// All interval endpoints, PL function values and raw tower scales are
/// kept rational so containment and nerve tests carry no tolerance.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) {
        if (d == 0) throw std::invalid_argument("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        num_ = n;
        den_ = d;
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    bool is_zero() const { return num_ == 0; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const { return Rational(-num_, den_, no_normalize{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
        return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

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

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// Power of two with integer exponent (either sign).
    static Rational pow2(int e) {
        if (e >= 0) {
            if (e > 62) throw std::overflow_error("Rational::pow2 exponent too large");
            return Rational(1LL << e);
        }
        if (e < -62) throw std::overflow_error("Rational::pow2 exponent too small");
        return Rational(1, 1LL << (-e), no_normalize{});
    }

    /// Largest e with 2^e <= *this.  Requires a positive value.
    int floor_log2() const {
        if (num_ <= 0) throw std::domain_error("floor_log2 of nonpositive rational");
        int e = 0;
        Rational x = *this;
        while (x >= Rational(2)) { x = x / Rational(2); ++e; }
        while (x < Rational(1)) { x = x * Rational(2); --e; }
        return e;
    }

    /// Parses "-12", "3.25", "7/2".
    static Rational parse(const std::string& text) {
        std::string s = text;
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            return Rational(parse_ll(s.substr(0, slash)), parse_ll(s.substr(slash + 1)));
        }
        bool neg = false;
        size_t i = 0;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) { neg = s[i] == '-'; ++i; }
        long long ip = 0, fp = 0, scale = 1;
        bool any = false;
        for (; i < s.size() && s[i] != '.'; ++i) {
            if (!std::isdigit((unsigned char)s[i])) throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
            ip = checked_mul_add(ip, 10, s[i] - '0');
            any = true;
        }
        if (i < s.size() && s[i] == '.') {
            for (++i; i < s.size(); ++i) {
                if (!std::isdigit((unsigned char)s[i])) throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
                fp = checked_mul_add(fp, 10, s[i] - '0');
                scale = checked_mul_add(scale, 10, 0);
                any = true;
            }
        }
        if (!any) throw std::invalid_argument("Rational::parse: bad number '" + text + "'");
        Rational r = Rational(ip) + Rational(fp, scale);
        return neg ? -r : r;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct no_normalize {};
    Rational(long long n, long long d, no_normalize) : num_(n), den_(d) {}

    static Rational from128(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: overflow");
        return Rational((long long)n, (long long)d, no_normalize{});
    }
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    static long long parse_ll(const std::string& s) {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("Rational::parse: bad integer '" + s + "'");
        return v;
    }
    static long long checked_mul_add(long long v, long long m, long long a) {
        __int128 r = (__int128)v * m + a;
        if (r > INT64_MAX) throw std::overflow_error("Rational::parse: overflow");
        return (long long)r;
    }

    long long num_;
    long long den_;  // > 0
};

inline Rational rat_min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational rat_max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace mapscale
