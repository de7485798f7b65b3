#ifndef SKEWALG_BIGINT_HPP
#define SKEWALG_BIGINT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace skewalg {

// Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs.
// Only the operations the rational/polynomial layer needs.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    static BigInt from_decimal(const std::string& digits); // digits only, no sign

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return negative_; }
    bool is_one() const { return !negative_ && limbs_.size() == 1 && limbs_[0] == 1; }
    int sign() const { return is_zero() ? 0 : (negative_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);
    // Truncated division (quotient rounds toward zero, remainder has sign of a).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    friend bool operator==(const BigInt& a, const BigInt& b);
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b);
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    static BigInt gcd(BigInt a, BigInt b);
    BigInt pow(unsigned e) const;

    std::string to_string() const;
    double to_double() const;
    bool fits_longlong() const;
    long long to_longlong() const; // valid only when fits_longlong()

private:
    bool negative_ = false;
    std::vector<uint32_t> limbs_; // little-endian, no trailing zeros, empty == 0

    void trim();
    static int cmp_mag(const BigInt& a, const BigInt& b);
    static BigInt add_mag(const BigInt& a, const BigInt& b);
    static BigInt sub_mag(const BigInt& a, const BigInt& b); // requires |a| >= |b|
};

} // namespace skewalg

#endif
