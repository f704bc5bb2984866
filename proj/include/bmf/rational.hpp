#pragma once

// Exact rational numbers on top of an arbitrary-precision integer.
// Every value is kept normalized: gcd(num, den) == 1 and den > 0.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace bmf {

using Int = boost::multiprecision::cpp_int;

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit on purpose
    Rational(Int n) : num_(std::move(n)), den_(1) {}
    Rational(Int n, Int d);                         // throws std::invalid_argument if d == 0
    Rational(std::int64_t n, std::int64_t d) : Rational(Int(n), Int(d)) {}

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o); // throws std::invalid_argument on /0

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    // Serialized form used by every file format and the CLI: "num/den", den always
    // present ("0/1", "-3/4").
    std::string str() const;

    // Decimal expansion with exactly `digits` fractional digits (truncated toward zero).
    // Display sugar only; never used in computations.
    std::string decimal(int digits) const;

    double to_double() const;

    // Parses "num/den" or a bare integer; throws std::invalid_argument on anything else
    // (including a zero or negative denominator).
    static Rational parse(const std::string& text);

    static Rational pow2(int e); // 2^e for any integer e

private:
    void normalize();

    Int num_;
    Int den_;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace bmf
