#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confal/errors.hpp"
#include "confal/rational.hpp"
#include "confal/vars.hpp"

namespace confal {

// Exponent vector indexed by VarId, trailing zeros trimmed. A pair of
// exponents on c and cinv is always reduced (c^m * cinv^n collapses to the
// surviving side), so equal monomials of the Laurent-in-c ring have equal
// vectors.
using Monomial = std::vector<int>;

namespace detail {

inline int mono_get(const Monomial& m, VarId v)
{
    return static_cast<size_t>(v) < m.size() ? m[static_cast<size_t>(v)] : 0;
}

inline void mono_trim(Monomial& m)
{
    while (!m.empty() && m.back() == 0)
        m.pop_back();
}

inline void mono_reduce_cinv(Monomial& m)
{
    int ec = mono_get(m, vars::par_c);
    int ei = mono_get(m, vars::par_cinv);
    if (ec > 0 && ei > 0) {
        int r = ec < ei ? ec : ei;
        m[vars::par_c] -= r;
        m[vars::par_cinv] -= r;
    }
    mono_trim(m);
}

inline void mono_set(Monomial& m, VarId v, int e)
{
    if (static_cast<size_t>(v) >= m.size()) {
        if (e == 0)
            return;
        m.resize(static_cast<size_t>(v) + 1, 0);
    }
    m[static_cast<size_t>(v)] = e;
    mono_reduce_cinv(m);
}

inline Monomial mono_mul(const Monomial& x, const Monomial& y)
{
    Monomial r = x.size() >= y.size() ? x : y;
    const Monomial& s = x.size() >= y.size() ? y : x;
    for (size_t i = 0; i < s.size(); ++i)
        r[i] += s[i];
    mono_reduce_cinv(r);
    return r;
}

// plain componentwise divisibility (callers must have cleared cinv first)
inline bool mono_divides(const Monomial& den, const Monomial& num)
{
    for (size_t i = 0; i < den.size(); ++i)
        if (den[i] > mono_get(num, static_cast<VarId>(i)))
            return false;
    return true;
}

inline Monomial mono_div(const Monomial& num, const Monomial& den)
{
    Monomial r = num;
    for (size_t i = 0; i < den.size(); ++i)
        r[i] -= den[i];
    mono_trim(r);
    return r;
}

inline int mono_total_degree(const Monomial& m)
{
    int t = 0;
    for (int e : m)
        t += e;
    return t;
}

} // namespace detail

class MultiPoly {
  public:
    MultiPoly() = default;
    MultiPoly(long long k) { insert(Monomial{}, Rational(k)); }
    MultiPoly(const Rational& q) { insert(Monomial{}, q); }

    static MultiPoly variable(VarId v)
    {
        MultiPoly p;
        Monomial m;
        detail::mono_set(m, v, 1);
        p.insert(m, Rational(1));
        return p;
    }

    static MultiPoly monomial(const Rational& coeff, Monomial m)
    {
        detail::mono_reduce_cinv(m);
        MultiPoly p;
        p.insert(std::move(m), coeff);
        return p;
    }

    // c^k for any integer k, negative powers landing on cinv
    static MultiPoly c_power(long long k)
    {
        Monomial m;
        if (k > 0)
            detail::mono_set(m, vars::par_c, static_cast<int>(k));
        else if (k < 0)
            detail::mono_set(m, vars::par_cinv, static_cast<int>(-k));
        MultiPoly p;
        p.insert(std::move(m), Rational(1));
        return p;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    bool is_constant() const
    {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rational constant_value() const
    {
        if (terms_.empty())
            return Rational(0);
        return terms_.begin()->second;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b)
    {
        MultiPoly r = a;
        for (const auto& [m, c] : b.terms_)
            r.insert(m, c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b)
    {
        MultiPoly r = a;
        for (const auto& [m, c] : b.terms_)
            r.insert(m, -c);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a)
    {
        MultiPoly r;
        for (const auto& [m, c] : a.terms_)
            r.terms_.emplace(m, -c);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b)
    {
        MultiPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_)
                r.insert(detail::mono_mul(ma, mb), ca * cb);
        return r;
    }
    friend MultiPoly operator*(const Rational& q, const MultiPoly& a)
    {
        MultiPoly r;
        if (q.is_zero())
            return r;
        for (const auto& [m, c] : a.terms_)
            r.terms_.emplace(m, q * c);
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const Rational& q) { return q * a; }

    MultiPoly& operator+=(const MultiPoly& b) { return *this = *this + b; }
    MultiPoly& operator-=(const MultiPoly& b) { return *this = *this - b; }
    MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b)
    {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    MultiPoly pow(unsigned e) const
    {
        MultiPoly r(1), b = *this;
        while (e) {
            if (e & 1u)
                r *= b;
            if (e >>= 1)
                b *= b;
        }
        return r;
    }

    // Single-variable capture-free substitution var := value.
    MultiPoly substitute(VarId var, const MultiPoly& value) const
    {
        std::map<int, MultiPoly> by_exp; // exponent of var -> remaining part
        for (const auto& [m, c] : terms_) {
            int e = detail::mono_get(m, var);
            Monomial rest = m;
            if (e)
                detail::mono_set(rest, var, 0);
            by_exp[e].insert(rest, c);
        }
        MultiPoly result, power(1);
        int cur = 0;
        for (auto& [e, part] : by_exp) {
            while (cur < e) {
                power *= value;
                ++cur;
            }
            result += part * power;
        }
        return result;
    }

    std::optional<int> degree_in(VarId var) const // nullopt encodes -infinity
    {
        if (terms_.empty())
            return std::nullopt;
        int d = 0;
        for (const auto& [m, c] : terms_)
            if (int e = detail::mono_get(m, var); e > d)
                d = e;
        return d;
    }

    MultiPoly coefficient_of(VarId var, int k) const
    {
        MultiPoly r;
        for (const auto& [m, c] : terms_) {
            if (detail::mono_get(m, var) != k)
                continue;
            Monomial rest = m;
            detail::mono_set(rest, var, 0);
            r.insert(rest, c);
        }
        return r;
    }

    MultiPoly derivative(VarId var) const
    {
        MultiPoly r;
        for (const auto& [m, c] : terms_) {
            int e = detail::mono_get(m, var);
            if (e == 0)
                continue;
            Monomial rest = m;
            detail::mono_set(rest, var, e - 1);
            r.insert(rest, c * Rational(e));
        }
        return r;
    }

    int total_degree() const
    {
        int d = 0;
        for (const auto& [m, c] : terms_)
            if (int t = detail::mono_total_degree(m); t > d)
                d = t;
        return d;
    }

    // Exact division in the Laurent-in-c ring; throws NotDivisible if no
    // polynomial quotient exists. c and cinv content is stripped first so the
    // long-division loop runs in a plain polynomial ring where leading terms
    // multiply monotonically.
    MultiPoly exact_divide(const MultiPoly& den) const
    {
        if (den.is_zero())
            throw std::domain_error("exact_divide: zero divisor");
        if (is_zero())
            return MultiPoly();
        long long cp = 0, cq = 0;
        MultiPoly p = strip_c_content(*this, cp);
        MultiPoly q = strip_c_content(den, cq);
        MultiPoly quo;
        MultiPoly rem = p;
        while (!rem.is_zero()) {
            const auto& [rm, rc] = *rem.terms_.rbegin();
            const auto& [qm, qc] = *q.terms_.rbegin();
            if (!detail::mono_divides(qm, rm))
                throw NotDivisible("exact_divide: remainder " + std::to_string(rem.term_count()) +
                                   " term(s), leading term not divisible");
            MultiPoly t = monomial(rc / qc, detail::mono_div(rm, qm));
            quo += t;
            rem -= t * q;
        }
        return quo * c_power(cp - cq);
    }

    std::string to_string() const;

  private:
    std::map<Monomial, Rational> terms_;

    void insert(Monomial m, const Rational& c)
    {
        if (c.is_zero())
            return;
        auto [it, fresh] = terms_.try_emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    // Divides all terms by the smallest signed power of c present; afterwards
    // no monomial carries cinv. Returns the removed power through `content`.
    static MultiPoly strip_c_content(const MultiPoly& p, long long& content)
    {
        long long lo = 0;
        bool first = true;
        for (const auto& [m, c] : p.terms_) {
            long long e = detail::mono_get(m, vars::par_c) - detail::mono_get(m, vars::par_cinv);
            if (first || e < lo) {
                lo = e;
                first = false;
            }
        }
        content = lo;
        if (lo == 0)
            return p;
        return p * c_power(-lo);
    }
};

inline MultiPoly operator*(long long k, const MultiPoly& p) { return Rational(k) * p; }

// p with var shifted by delta: p(..., var + delta, ...)
inline MultiPoly shifted(const MultiPoly& p, VarId var, const MultiPoly& delta)
{
    return p.substitute(var, MultiPoly::variable(var) + delta);
}

} // namespace confal
