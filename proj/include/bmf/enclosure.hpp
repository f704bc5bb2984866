#pragma once

// Closed rational intervals [lo, hi] used as certified enclosures of real values.

#include "bmf/rational.hpp"

#include <stdexcept>
#include <string>

namespace bmf {

struct Enclosure {
    Rational lo;
    Rational hi;

    Enclosure() = default;
    explicit Enclosure(const Rational& point) : lo(point), hi(point) {}
    Enclosure(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (hi < lo) throw std::invalid_argument("enclosure: lo > hi");
    }

    // Interval spanned by two endpoints in either order.
    static Enclosure spanning(const Rational& a, const Rational& b) {
        return a <= b ? Enclosure(a, b) : Enclosure(b, a);
    }

    Rational width() const { return hi - lo; }
    bool exact() const { return lo == hi; }

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const Enclosure& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const Enclosure& o) const { return lo <= o.hi && o.lo <= hi; }

    // Smallest interval containing both.
    Enclosure hull(const Enclosure& o) const {
        return Enclosure(min(lo, o.lo), max(hi, o.hi));
    }

    friend Enclosure operator+(const Enclosure& a, const Enclosure& b) {
        return Enclosure(a.lo + b.lo, a.hi + b.hi);
    }
    friend Enclosure operator-(const Enclosure& a, const Enclosure& b) {
        return Enclosure(a.lo - b.hi, a.hi - b.lo);
    }
    // Scaling by an exact rational (sign-aware).
    friend Enclosure operator*(const Enclosure& a, const Rational& s) {
        return s.sign() >= 0 ? Enclosure(a.lo * s, a.hi * s) : Enclosure(a.hi * s, a.lo * s);
    }
    friend Enclosure operator/(const Enclosure& a, const Rational& s) {
        if (s.is_zero()) throw std::invalid_argument("enclosure: division by zero");
        return s.sign() > 0 ? Enclosure(a.lo / s, a.hi / s) : Enclosure(a.hi / s, a.lo / s);
    }
    friend Enclosure operator+(const Enclosure& a, const Rational& s) {
        return Enclosure(a.lo + s, a.hi + s);
    }

    friend bool operator==(const Enclosure& a, const Enclosure& b) {
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const Enclosure& a, const Enclosure& b) { return !(a == b); }

    std::string str() const { return lo.str() + " " + hi.str(); }
};

} // namespace bmf
