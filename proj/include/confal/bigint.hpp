#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace confal {

// Arbitrary-precision signed integer, sign-magnitude over base-2^32 limbs.
// Magnitudes in this project stay small (tens of digits); all algorithms are
// schoolbook plus binary long division, which is easy to audit.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v)
    {
        if (v == 0)
            return;
        sign_ = v < 0 ? -1 : 1;
        unsigned long long m =
            v < 0 ? ~static_cast<unsigned long long>(v) + 1ULL : static_cast<unsigned long long>(v);
        while (m) {
            limbs_.push_back(static_cast<uint32_t>(m & 0xffffffffULL));
            m >>= 32;
        }
    }

    static BigInt from_string(std::string_view s)
    {
        BigInt r;
        size_t i = 0;
        int sign = 1;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-')
                sign = -1;
            ++i;
        }
        if (i == s.size())
            throw std::invalid_argument("BigInt::from_string: no digits");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw std::invalid_argument("BigInt::from_string: bad digit");
            r.mul_small_inplace(10);
            r.add_small_inplace(static_cast<uint32_t>(s[i] - '0'));
        }
        if (!r.limbs_.empty())
            r.sign_ = sign;
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    int sign() const { return sign_; }
    bool is_one() const { return sign_ == 1 && limbs_.size() == 1 && limbs_[0] == 1; }

    // Fits in long long (used by fast paths and tests).
    bool fits_ll() const
    {
        if (limbs_.size() > 2)
            return false;
        unsigned long long m = mag_ull();
        if (sign_ >= 0)
            return m <= 0x7fffffffffffffffULL;
        return m <= 0x8000000000000000ULL;
    }
    long long to_ll() const
    {
        unsigned long long m = mag_ull();
        return sign_ < 0 ? -static_cast<long long>(m) : static_cast<long long>(m);
    }

    friend BigInt operator-(const BigInt& a)
    {
        BigInt r = a;
        r.sign_ = -r.sign_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b)
    {
        if (a.is_zero())
            return b;
        if (b.is_zero())
            return a;
        BigInt r;
        if (a.sign_ == b.sign_) {
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.sign_ = a.sign_;
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0)
            return r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.sign_ = a.sign_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.sign_ = b.sign_;
        }
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b)
    {
        BigInt r;
        if (a.is_zero() || b.is_zero())
            return r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.sign_ = a.sign_ * b.sign_;
        return r;
    }

    BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
    BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
    BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

    // Truncated division (C semantics: quotient rounds toward zero,
    // remainder has the sign of the numerator).
    static void divmod(const BigInt& num, const BigInt& den, BigInt& quo, BigInt& rem)
    {
        if (den.is_zero())
            throw std::domain_error("BigInt: division by zero");
        quo = BigInt();
        rem = BigInt();
        if (num.is_zero())
            return;
        divmod_mag(num.limbs_, den.limbs_, quo.limbs_, rem.limbs_);
        if (!quo.limbs_.empty())
            quo.sign_ = num.sign_ * den.sign_;
        if (!rem.limbs_.empty())
            rem.sign_ = num.sign_;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b)
    {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b)
    {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    static BigInt gcd(const BigInt& a, const BigInt& b)
    {
        // Binary gcd on magnitudes.
        std::vector<uint32_t> x = a.limbs_, y = b.limbs_;
        if (x.empty())
            return abs(b);
        if (y.empty())
            return abs(a);
        unsigned sx = trailing_zero_bits(x), sy = trailing_zero_bits(y);
        unsigned shift = sx < sy ? sx : sy;
        shr_bits(x, sx);
        for (;;) {
            shr_bits(y, trailing_zero_bits(y));
            int c = cmp_mag(x, y);
            if (c == 0)
                break;
            if (c > 0)
                x.swap(y);
            y = sub_mag(y, x); // y > x, both odd -> y-x even and nonzero
        }
        shl_bits(x, shift);
        BigInt r;
        r.limbs_ = std::move(x);
        r.sign_ = 1;
        return r;
    }

    static BigInt abs(const BigInt& a)
    {
        BigInt r = a;
        if (r.sign_ < 0)
            r.sign_ = 1;
        return r;
    }

    static BigInt pow(const BigInt& base, unsigned e)
    {
        BigInt r(1), b = base;
        while (e) {
            if (e & 1u)
                r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b)
    {
        return a.sign_ == b.sign_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b)
    {
        if (a.sign_ != b.sign_)
            return a.sign_ < b.sign_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.sign_ >= 0 ? c < 0 : c > 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    std::string to_string() const
    {
        if (is_zero())
            return "0";
        std::vector<uint32_t> m = limbs_;
        std::string digits;
        while (!m.empty()) {
            uint32_t rem = divmod_small_inplace(m, 1000000000u);
            for (int k = 0; k < 9; ++k) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0')
            digits.pop_back();
        if (sign_ < 0)
            digits.push_back('-');
        return std::string(digits.rbegin(), digits.rend());
    }

  private:
    int sign_ = 0;                // -1, 0, +1; 0 iff limbs_ empty
    std::vector<uint32_t> limbs_; // little-endian, no high zero limb

    unsigned long long mag_ull() const
    {
        unsigned long long m = 0;
        if (limbs_.size() > 1)
            m = static_cast<unsigned long long>(limbs_[1]) << 32;
        if (!limbs_.empty())
            m |= limbs_[0];
        return m;
    }

    void mul_small_inplace(uint32_t f)
    {
        uint64_t carry = 0;
        for (auto& w : limbs_) {
            uint64_t p = static_cast<uint64_t>(w) * f + carry;
            w = static_cast<uint32_t>(p);
            carry = p >> 32;
        }
        if (carry)
            limbs_.push_back(static_cast<uint32_t>(carry));
    }
    void add_small_inplace(uint32_t v)
    {
        uint64_t carry = v;
        for (size_t i = 0; carry && i < limbs_.size(); ++i) {
            uint64_t s = static_cast<uint64_t>(limbs_[i]) + carry;
            limbs_[i] = static_cast<uint32_t>(s);
            carry = s >> 32;
        }
        if (carry)
            limbs_.push_back(static_cast<uint32_t>(carry));
    }

    static void trim(std::vector<uint32_t>& v)
    {
        while (!v.empty() && v.back() == 0)
            v.pop_back();
    }

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b)
    {
        if (a.size() != b.size())
            return a.size() < b.size() ? -1 : 1;
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i])
                return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b)
    {
        const auto& lo = a.size() >= b.size() ? b : a;
        const auto& hi = a.size() >= b.size() ? a : b;
        std::vector<uint32_t> r(hi.size());
        uint64_t carry = 0;
        for (size_t i = 0; i < hi.size(); ++i) {
            uint64_t s = static_cast<uint64_t>(hi[i]) + (i < lo.size() ? lo[i] : 0u) + carry;
            r[i] = static_cast<uint32_t>(s);
            carry = s >> 32;
        }
        if (carry)
            r.push_back(static_cast<uint32_t>(carry));
        return r;
    }

    // requires a >= b
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b)
    {
        std::vector<uint32_t> r(a.size());
        int64_t borrow = 0;
        for (size_t i = 0; i < a.size(); ++i) {
            int64_t t = static_cast<int64_t>(a[i]) - (i < b.size() ? b[i] : 0u) - borrow;
            if (t < 0) {
                t += int64_t(1) << 32;
                borrow = 1;
            } else {
                borrow = 0;
            }
            r[i] = static_cast<uint32_t>(t);
        }
        trim(r);
        return r;
    }

    static std::vector<uint32_t> mul_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b)
    {
        std::vector<uint32_t> r(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < b.size(); ++j) {
                uint64_t cur = static_cast<uint64_t>(a[i]) * b[j] + r[i + j] + carry;
                r[i + j] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
            }
            size_t k = i + b.size();
            while (carry) {
                uint64_t cur = static_cast<uint64_t>(r[k]) + carry;
                r[k] = static_cast<uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        trim(r);
        return r;
    }

    static unsigned trailing_zero_bits(const std::vector<uint32_t>& v)
    {
        unsigned n = 0;
        for (uint32_t w : v) {
            if (w == 0) {
                n += 32;
                continue;
            }
            while (!(w & 1u)) {
                ++n;
                w >>= 1;
            }
            break;
        }
        return n;
    }

    static void shr_bits(std::vector<uint32_t>& v, unsigned n)
    {
        size_t words = n / 32;
        unsigned bits = n % 32;
        if (words)
            v.erase(v.begin(), v.begin() + static_cast<long>(words < v.size() ? words : v.size()));
        if (bits && !v.empty()) {
            for (size_t i = 0; i + 1 < v.size(); ++i)
                v[i] = (v[i] >> bits) | (v[i + 1] << (32 - bits));
            v.back() >>= bits;
        }
        trim(v);
    }

    static void shl_bits(std::vector<uint32_t>& v, unsigned n)
    {
        if (v.empty() || n == 0)
            return;
        size_t words = n / 32;
        unsigned bits = n % 32;
        if (bits) {
            uint32_t carry = 0;
            for (auto& w : v) {
                uint32_t nw = (w << bits) | carry;
                carry = w >> (32 - bits);
                w = nw;
            }
            if (carry)
                v.push_back(carry);
        }
        v.insert(v.begin(), words, 0u);
    }

    static bool get_bit(const std::vector<uint32_t>& v, size_t i)
    {
        return (v[i / 32] >> (i % 32)) & 1u;
    }

    static uint32_t divmod_small_inplace(std::vector<uint32_t>& v, uint32_t d)
    {
        uint64_t rem = 0;
        for (size_t i = v.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | v[i];
            v[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        trim(v);
        return static_cast<uint32_t>(rem);
    }

    // Binary long division; magnitudes here are small enough that the
    // bit-serial loop is never a bottleneck.
    static void divmod_mag(const std::vector<uint32_t>& num, const std::vector<uint32_t>& den,
                           std::vector<uint32_t>& quo, std::vector<uint32_t>& rem)
    {
        quo.clear();
        rem.clear();
        if (cmp_mag(num, den) < 0) {
            rem = num;
            return;
        }
        if (den.size() == 1) {
            quo = num;
            uint32_t r = divmod_small_inplace(quo, den[0]);
            if (r)
                rem.push_back(r);
            return;
        }
        size_t nbits = num.size() * 32;
        quo.assign(num.size(), 0);
        for (size_t i = nbits; i-- > 0;) {
            shl_bits(rem, 1);
            if (get_bit(num, i)) {
                if (rem.empty())
                    rem.push_back(1);
                else
                    rem[0] |= 1u;
            }
            if (cmp_mag(rem, den) >= 0) {
                rem = sub_mag(rem, den);
                quo[i / 32] |= (1u << (i % 32));
            }
        }
        trim(quo);
    }
};

} // namespace confal
