#ifndef SKEWALG_RATIONAL_HPP
#define SKEWALG_RATIONAL_HPP

#include <stdexcept>
#include <string>

#include "skewalg/bigint.hpp"

namespace skewalg {

/// Exact rational number; always stored reduced with positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    Rational inverse() const;
    Rational pow(long long e) const;
    Rational abs() const { return sign() < 0 ? -*this : *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }

    double to_double() const;
    std::string to_string() const;

    /// gcd(p1/q1, p2/q2) = gcd(p1,p2)/lcm(q1,q2); gcd(0,x) = |x|.
    static Rational gcd(const Rational& a, const Rational& b);

private:
    BigInt num_, den_;
    void normalize();
};

} // namespace skewalg

#endif
