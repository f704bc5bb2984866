#include "bmf/rational.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bmf {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

Rational::Rational(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw std::invalid_argument("rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    Int g = gcd(abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::invalid_argument("rational: division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
}

std::string Rational::str() const {
    return num_.str() + "/" + den_.str();
}

std::string Rational::decimal(int digits) const {
    if (digits < 0) throw std::invalid_argument("rational: negative digit count");
    Int n = abs(num_);
    std::string out = sign() < 0 ? "-" : "";
    out += Int(n / den_).str();
    if (digits == 0) return out;
    out += '.';
    Int rem = n % den_;
    for (int i = 0; i < digits; ++i) {
        rem *= 10;
        out += char('0' + int(rem / den_));
        rem %= den_;
    }
    return out;
}

double Rational::to_double() const {
    using boost::multiprecision::cpp_rational;
    return cpp_rational(num_, den_).convert_to<double>();
}

Rational Rational::parse(const std::string& text) {
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("rational: cannot parse '" + text + "'");
    };
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    // cpp_int's string constructor rejects an explicit leading '+'
    auto strip_plus = [](std::string s) {
        if (!s.empty() && s[0] == '+') s.erase(0, 1);
        return s;
    };
    std::size_t slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_int(text)) return fail();
        return Rational(Int(strip_plus(text)));
    }
    std::string ns = strip_plus(text.substr(0, slash));
    std::string ds = strip_plus(text.substr(slash + 1));
    if (!is_int(ns) || !is_int(ds)) return fail();
    Int d(ds);
    if (d <= 0) return fail(); // serialized form always carries a positive denominator
    return Rational(Int(ns), d);
}

Rational Rational::pow2(int e) {
    Int p = Int(1) << static_cast<unsigned>(e < 0 ? -e : e);
    return e < 0 ? Rational(Int(1), p) : Rational(p);
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace bmf
