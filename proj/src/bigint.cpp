#include "skewalg/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewalg {

namespace {
constexpr uint64_t BASE = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v < 0) {
        negative_ = true;
        // avoid overflow on LLONG_MIN
        uint64_t mag = static_cast<uint64_t>(-(v + 1)) + 1;
        limbs_.push_back(static_cast<uint32_t>(mag & 0xffffffffu));
        if (mag >> 32) limbs_.push_back(static_cast<uint32_t>(mag >> 32));
    } else if (v > 0) {
        uint64_t mag = static_cast<uint64_t>(v);
        limbs_.push_back(static_cast<uint32_t>(mag & 0xffffffffu));
        if (mag >> 32) limbs_.push_back(static_cast<uint32_t>(mag >> 32));
    }
}

BigInt BigInt::from_decimal(const std::string& digits) {
    BigInt r;
    for (char ch : digits) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("BigInt: bad digit");
        // r = r*10 + d
        uint64_t carry = static_cast<uint64_t>(ch - '0');
        for (auto& limb : r.limbs_) {
            uint64_t cur = static_cast<uint64_t>(limb) * 10 + carry;
            limb = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    }
    r.trim();
    return r;
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) negative_ = false;
}

int BigInt::cmp_mag(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigInt BigInt::add_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    const auto& x = a.limbs_;
    const auto& y = b.limbs_;
    size_t n = std::max(x.size(), y.size());
    r.limbs_.resize(n, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t cur = carry;
        if (i < x.size()) cur += x[i];
        if (i < y.size()) cur += y[i];
        r.limbs_[i] = static_cast<uint32_t>(cur & 0xffffffffu);
        carry = cur >> 32;
    }
    if (carry) r.limbs_.push_back(static_cast<uint32_t>(carry));
    return r;
}

BigInt BigInt::sub_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    r.limbs_ = a.limbs_;
    int64_t borrow = 0;
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
        int64_t cur = static_cast<int64_t>(r.limbs_[i]) - borrow -
                      (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
        if (cur < 0) {
            cur += static_cast<int64_t>(BASE);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_[i] = static_cast<uint32_t>(cur);
    }
    r.trim();
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.is_zero()) r.negative_ = !r.negative_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    r.negative_ = false;
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.negative_ == b.negative_) {
        BigInt r = BigInt::add_mag(a, b);
        r.negative_ = a.negative_;
        r.trim();
        return r;
    }
    int c = BigInt::cmp_mag(a, b);
    if (c == 0) return BigInt();
    BigInt r = c > 0 ? BigInt::sub_mag(a, b) : BigInt::sub_mag(b, a);
    r.negative_ = c > 0 ? a.negative_ : b.negative_;
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.limbs_.size(); ++j) {
            uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                           r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
        }
        size_t k = i + b.limbs_.size();
        while (carry) {
            uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<uint32_t>(cur & 0xffffffffu);
            carry = cur >> 32;
            ++k;
        }
    }
    r.negative_ = a.negative_ != b.negative_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    int c = cmp_mag(a, b);
    if (c < 0) {
        q = BigInt();
        r = a;
        return;
    }
    // schoolbook long division on magnitudes, bit by bit
    BigInt quotient, remainder;
    size_t bits = a.limbs_.size() * 32;
    quotient.limbs_.assign(a.limbs_.size(), 0);
    for (size_t i = bits; i-- > 0;) {
        // remainder <<= 1
        uint32_t carry = 0;
        for (auto& limb : remainder.limbs_) {
            uint32_t next = limb >> 31;
            limb = (limb << 1) | carry;
            carry = next;
        }
        if (carry) remainder.limbs_.push_back(carry);
        // bring down bit i of |a|
        if ((a.limbs_[i / 32] >> (i % 32)) & 1u) {
            if (remainder.limbs_.empty()) remainder.limbs_.push_back(0);
            remainder.limbs_[0] |= 1u;
        }
        remainder.trim();
        if (cmp_mag(remainder, b) >= 0) {
            remainder = sub_mag(remainder, b);
            quotient.limbs_[i / 32] |= (1u << (i % 32));
        }
    }
    quotient.trim();
    quotient.negative_ = !quotient.is_zero() && (a.negative_ != b.negative_);
    remainder.negative_ = !remainder.is_zero() && a.negative_;
    q = quotient;
    r = remainder;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

bool operator==(const BigInt& a, const BigInt& b) {
    return a.negative_ == b.negative_ && a.limbs_ == b.limbs_;
}

bool operator<(const BigInt& a, const BigInt& b) {
    if (a.negative_ != b.negative_) return a.negative_;
    int c = BigInt::cmp_mag(a, b);
    return a.negative_ ? c > 0 : c < 0;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.negative_ = false;
    b.negative_ = false;
    while (!b.is_zero()) {
        BigInt q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    return a;
}

BigInt BigInt::pow(unsigned e) const {
    BigInt base = *this, result(1);
    while (e) {
        if (e & 1u) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    BigInt t = abs();
    std::string out;
    BigInt ten(10);
    while (!t.is_zero()) {
        BigInt q, r;
        divmod(t, ten, q, r);
        out.push_back(static_cast<char>('0' + (r.limbs_.empty() ? 0 : r.limbs_[0])));
        t = q;
    }
    if (negative_) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

double BigInt::to_double() const {
    double r = 0.0;
    for (size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + limbs_[i];
    return negative_ ? -r : r;
}

bool BigInt::fits_longlong() const {
    if (limbs_.size() > 2) return false;
    if (limbs_.size() < 2) return true;
    uint64_t mag = (static_cast<uint64_t>(limbs_[1]) << 32) | limbs_[0];
    return negative_ ? mag <= (1ull << 63) : mag < (1ull << 63);
}

long long BigInt::to_longlong() const {
    uint64_t mag = 0;
    if (!limbs_.empty()) mag = limbs_[0];
    if (limbs_.size() > 1) mag |= static_cast<uint64_t>(limbs_[1]) << 32;
    return negative_ ? -static_cast<long long>(mag) : static_cast<long long>(mag);
}

} // namespace skewalg
