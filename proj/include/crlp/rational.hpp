#pragma once

// Exact rational arithmetic. Rational is the only ground numeric type in the
// workbench: every approximation, tolerance and LP coefficient is one.
// Backed by boost::multiprecision (arbitrary-precision integers), kept in
// canonical form: denominator > 0, gcd(|num|, den) = 1.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crlp {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(n) {}                       // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : v_(n) {}                   // NOLINT(google-explicit-constructor)
    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0)
            throw std::domain_error("Rational: zero denominator");
        if (den < 0)
            v_.assign(boost::multiprecision::cpp_rational(-num, -den));
        else
            v_.assign(boost::multiprecision::cpp_rational(num, den));
    }
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero())
            throw std::domain_error("Rational: division by zero");
        return Rational(a.v_ / b.v_);
    }
    Rational operator-() const { return Rational(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { return a.v_ < 0 ? Rational(-a.v_) : a; }
    friend const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
    friend const Rational& min(const Rational& a, const Rational& b) { return a < b ? a : b; }

    /// 2^e for any (possibly negative) exponent.
    static Rational pow2(long e) {
        if (e >= 0)
            return Rational(BigInt(1) << e);
        return Rational(BigInt(1), BigInt(1) << (-e));
    }

    /// "p/q" or "p" when q = 1.
    std::string str() const {
        std::string s = num().str();
        if (!is_integer()) {
            s += '/';
            s += den().str();
        }
        return s;
    }

    /// Decimal expansion with `digits` fractional digits, truncated toward zero.
    std::string decimal(unsigned digits) const;

    /// Parses "p", "-p", "p/q". Returns nullopt on malformed input or q = 0.
    static std::optional<Rational> parse(std::string_view text);

private:
    explicit Rational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}
    boost::multiprecision::cpp_rational v_;
};

inline std::string Rational::decimal(unsigned digits) const {
    BigInt n = num();
    BigInt d = den();
    std::string out;
    if (n < 0) {
        out += '-';
        n = -n;
    }
    out += BigInt(n / d).str();
    if (digits > 0) {
        out += '.';
        BigInt rem = n % d;
        for (unsigned i = 0; i < digits; ++i) {
            rem *= 10;
            out += static_cast<char>('0' + static_cast<int>(rem / d));
            rem %= d;
        }
    }
    return out;
}

inline std::optional<Rational> Rational::parse(std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
        if (s.empty())
            return std::nullopt;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size())
            return std::nullopt;
        for (std::size_t j = i; j < s.size(); ++j)
            if (s[j] < '0' || s[j] > '9')
                return std::nullopt;
        return BigInt(std::string(s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        auto n = parse_int(text);
        if (!n)
            return std::nullopt;
        return Rational(*n);
    }
    auto n = parse_int(text.substr(0, slash));
    auto d = parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0)
        return std::nullopt;
    return Rational(*n, *d);
}

/// Closed rational interval [lo, hi]. Used both as the enclosure of a Crn at
/// a given working precision and as the coefficient box of a snapshot LP.
struct Interval {
    Rational lo;
    Rational hi;

    Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi)
            throw std::invalid_argument("Interval: lo > hi");
    }
    static Interval point(const Rational& q) { return Interval(q, q); }

    bool is_point() const { return lo == hi; }
    bool contains(const Rational& q) const { return lo <= q && q <= hi; }
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / Rational(2); }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval(a.lo + b.lo, a.hi + b.hi);
}
inline Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }
inline Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }
inline Interval operator*(const Interval& a, const Rational& c) {
    if (c.sign() >= 0)
        return Interval(a.lo * c, a.hi * c);
    return Interval(a.hi * c, a.lo * c);
}

}  // namespace crlp
