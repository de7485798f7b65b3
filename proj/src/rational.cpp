#include "skewalg/rational.hpp"

#include <cmath>

namespace skewalg {

void Rational::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return Rational(den_, num_);
}

Rational Rational::pow(long long e) const {
    if (e == 0) return Rational(1);
    if (e < 0) return inverse().pow(-e);
    Rational r;
    r.num_ = num_.pow(static_cast<unsigned>(e));
    r.den_ = den_.pow(static_cast<unsigned>(e));
    return r;
}

double Rational::to_double() const {
    double n = num_.to_double();
    double d = den_.to_double();
    if (std::isfinite(n) && std::isfinite(d)) return n / d;
    // magnitudes beyond double range: divide with scaling via string lengths
    int shift = static_cast<int>(num_.to_string().size()) -
                static_cast<int>(den_.to_string().size());
    Rational scaled = *this * Rational(BigInt(1), BigInt(10).pow(shift > 0 ? shift : 0)) *
                      Rational(BigInt(10).pow(shift < 0 ? -shift : 0), BigInt(1));
    return scaled.num().to_double() / scaled.den().to_double() *
           std::pow(10.0, shift);
}

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::gcd(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b.abs();
    if (b.is_zero()) return a.abs();
    BigInt gn = BigInt::gcd(a.num_, b.num_);
    BigInt gd = BigInt::gcd(a.den_, b.den_);
    // lcm(q1,q2) = q1*q2/gcd
    return Rational(gn, a.den_ * (b.den_ / gd));
}

} // namespace skewalg
