#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "confal/conformal.hpp"
#include "confal/errors.hpp"
#include "confal/poly.hpp"
#include "confal/report.hpp"

namespace confal {

// Basis symbol of the coefficient space: either the scalar unit or a loop
// basis vector L_{alpha,i} with Lie bracket [L_{a,i}, L_{b,j}] = (b-a) L_{a+b,i+j}.
struct LoopSym {
    bool scalar = true;
    int alpha = 0;
    int index = 0;

    friend bool operator<(const LoopSym& x, const LoopSym& y)
    {
        if (x.scalar != y.scalar)
            return x.scalar && !y.scalar;
        if (x.alpha != y.alpha)
            return x.alpha < y.alpha;
        return x.index < y.index;
    }
    friend bool operator==(const LoopSym& x, const LoopSym& y)
    {
        return x.scalar == y.scalar && x.alpha == y.alpha && x.index == y.index;
    }
};

class LoopElement {
  public:
    LoopElement() = default;

    static LoopElement unit(const Rational& q = Rational(1))
    {
        LoopElement e;
        e.add(LoopSym{}, q);
        return e;
    }
    static LoopElement basis(int alpha, int index, const Rational& q = Rational(1))
    {
        LoopElement e;
        e.add(LoopSym{false, alpha, index}, q);
        return e;
    }

    void add(const LoopSym& s, const Rational& q)
    {
        if (q.is_zero())
            return;
        auto [it, fresh] = terms_.try_emplace(s, q);
        if (!fresh) {
            it->second += q;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    const std::map<LoopSym, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_scalar() const
    {
        for (const auto& [s, q] : terms_)
            if (!s.scalar)
                return false;
        return true;
    }

    friend LoopElement operator+(const LoopElement& x, const LoopElement& y)
    {
        LoopElement r = x;
        for (const auto& [s, q] : y.terms_)
            r.add(s, q);
        return r;
    }
    friend LoopElement operator-(const LoopElement& x, const LoopElement& y)
    {
        LoopElement r = x;
        for (const auto& [s, q] : y.terms_)
            r.add(s, -q);
        return r;
    }
    friend LoopElement operator*(const Rational& q, const LoopElement& x)
    {
        LoopElement r;
        for (const auto& [s, c] : x.terms_)
            r.add(s, q * c);
        return r;
    }

    // product with at least one scalar side (the delta factors)
    friend LoopElement operator*(const LoopElement& x, const LoopElement& y)
    {
        LoopElement r;
        for (const auto& [sx, qx] : x.terms_)
            for (const auto& [sy, qy] : y.terms_) {
                if (!sx.scalar && !sy.scalar)
                    throw Error("LoopElement: product of two loop-valued factors is undefined");
                r.add(sx.scalar ? sy : sx, qx * qy);
            }
        return r;
    }

    friend bool operator==(const LoopElement& x, const LoopElement& y)
    {
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const LoopElement& x, const LoopElement& y) { return !(x == y); }

    static LoopElement lie_bracket(const LoopElement& x, const LoopElement& y)
    {
        LoopElement r;
        for (const auto& [sx, qx] : x.terms_) {
            if (sx.scalar)
                continue; // scalars are central
            for (const auto& [sy, qy] : y.terms_) {
                if (sy.scalar)
                    continue;
                Rational coeff = qx * qy * Rational(sy.alpha - sx.alpha);
                r.add(LoopSym{false, sx.alpha + sy.alpha, sx.index + sy.index}, coeff);
            }
        }
        return r;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const auto& [s, q] : terms_) {
            if (!out.empty())
                out += " + ";
            out += q.to_string();
            if (!s.scalar)
                out += "*L(" + std::to_string(s.alpha) + "," + std::to_string(s.index) + ")";
        }
        return out;
    }

  private:
    std::map<LoopSym, Rational> terms_;
};

inline void expand_window(IndexWindow& w, int i)
{
    if (w.empty()) {
        w.lo = w.hi = i;
    } else {
        w.lo = std::min(w.lo, i);
        w.hi = std::max(w.hi, i);
    }
}

// Rectangle of exponent pairs, used for bands and validity regions.
struct Rect {
    IndexWindow z; // z-exponents (first variable)
    IndexWindow w; // w-exponents (second variable)
    bool empty() const { return z.empty() || w.empty(); }
    bool contains(int m, int n) const { return z.contains(m) && w.contains(n); }
    static Rect intersect(const Rect& a, const Rect& b)
    {
        return Rect{{std::max(a.z.lo, b.z.lo), std::min(a.z.hi, b.z.hi)},
                    {std::max(a.w.lo, b.w.lo), std::min(a.w.hi, b.w.hi)}};
    }
};

// Banded one-variable formal distribution. Coefficients are exact only on
// the validity interval; everything outside may be corrupted by truncation
// and is never compared.
class Distribution1 {
  public:
    Distribution1() = default;
    explicit Distribution1(IndexWindow validity) : band_(validity), validity_(validity) {}

    const IndexWindow& band() const { return band_; }
    const IndexWindow& validity() const { return validity_; }
    void restrict_validity(IndexWindow v) { validity_ = v; }

    LoopElement coeff(int n) const
    {
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? LoopElement() : it->second;
    }
    void set(int n, LoopElement e)
    {
        expand_window(band_, n);
        if (e.is_zero())
            coeffs_.erase(n);
        else
            coeffs_[n] = std::move(e);
    }

    bool zero_on_validity() const
    {
        for (const auto& [n, e] : coeffs_)
            if (validity_.contains(n) && !e.is_zero())
                return false;
        return true;
    }

    const std::map<int, LoopElement>& coeffs() const { return coeffs_; }

  private:
    std::map<int, LoopElement> coeffs_;
    IndexWindow band_{0, -1};
    IndexWindow validity_{0, -1};
};

// Banded two-variable formal distribution with the same validity discipline.
class Distribution2 {
  public:
    Distribution2() = default;
    explicit Distribution2(Rect validity) : band_(validity), validity_(validity) {}

    const Rect& band() const { return band_; }
    const Rect& validity() const { return validity_; }
    void restrict_validity(Rect v) { validity_ = v; }

    LoopElement coeff(int m, int n) const
    {
        auto it = coeffs_.find({m, n});
        return it == coeffs_.end() ? LoopElement() : it->second;
    }
    void set(int m, int n, LoopElement e)
    {
        expand_window(band_.z, m);
        expand_window(band_.w, n);
        if (e.is_zero())
            coeffs_.erase({m, n});
        else
            coeffs_[{m, n}] = std::move(e);
    }

    bool zero_on_validity() const
    {
        for (const auto& [mn, e] : coeffs_)
            if (validity_.contains(mn.first, mn.second) && !e.is_zero())
                return false;
        return true;
    }

    const std::map<std::pair<int, int>, LoopElement>& coeffs() const { return coeffs_; }

  private:
    std::map<std::pair<int, int>, LoopElement> coeffs_;
    Rect band_{{0, -1}, {0, -1}};
    Rect validity_{{0, -1}, {0, -1}};
};

// L_i(z) = sum_alpha L_{alpha,i} z^{-alpha-2} over a finite alpha band.
inline Distribution1 make_L_distribution(int i, IndexWindow alpha_band)
{
    if (alpha_band.empty())
        throw Error("make_L_distribution: empty alpha band");
    IndexWindow exps{-alpha_band.hi - 2, -alpha_band.lo - 2};
    Distribution1 d(exps);
    for (int alpha = alpha_band.lo; alpha <= alpha_band.hi; ++alpha)
        d.set(-alpha - 2, LoopElement::basis(alpha, i));
    return d;
}

// delta(z,w) = sum_i z^i w^{-i-1}, scalar valued, exact on the whole band
// rectangle (off-diagonal entries are genuinely zero).
inline Distribution2 make_delta(IndexWindow band)
{
    if (band.empty())
        throw Error("make_delta: empty band");
    Rect r{{band.lo, band.hi}, {-band.hi - 1, -band.lo - 1}};
    Distribution2 d(r);
    for (int i = band.lo; i <= band.hi; ++i)
        d.set(i, -i - 1, LoopElement::unit());
    return d;
}

// j-th w-derivative of delta over the z-band; coefficient of z^m w^{-m-1-j}
// is (-m-1)(-m-2)...(-m-j), exact on its band rectangle.
inline Distribution2 make_delta_derivative(unsigned j, IndexWindow band)
{
    if (band.empty())
        throw Error("make_delta_derivative: empty band");
    Rect r{{band.lo, band.hi}, {-band.hi - 1 - int(j), -band.lo - 1 - int(j)}};
    Distribution2 d(r);
    for (int m = band.lo; m <= band.hi; ++m) {
        Rational f(1);
        for (unsigned t = 1; t <= j; ++t)
            f *= Rational(-m - int(t));
        d.set(m, -m - 1 - int(j), f.is_zero() ? LoopElement() : LoopElement::unit(f));
    }
    return d;
}

// Coefficient-wise Lie bracket [a(z), b(w)].
inline Distribution2 bracket_distributions(const Distribution1& a, const Distribution1& b)
{
    Rect validity{a.validity(), b.validity()};
    Distribution2 out(validity);
    for (const auto& [m, am] : a.coeffs())
        for (const auto& [n, bn] : b.coeffs())
            out.set(m, n, LoopElement::lie_bracket(am, bn));
    return out;
}

// (z - w)^N * a, with the validity rectangle shrunk so that every retained
// coefficient is built only from exact sources.
inline Distribution2 mul_z_minus_w_pow(const Distribution2& a, unsigned N)
{
    Rect validity{{a.validity().z.lo + int(N), a.validity().z.hi},
                  {a.validity().w.lo + int(N), a.validity().w.hi}};
    Distribution2 out(validity);
    Rect reach{{a.band().z.lo, a.band().z.hi + int(N)}, {a.band().w.lo, a.band().w.hi + int(N)}};
    std::vector<Rational> binom(N + 1);
    binom[0] = Rational(1);
    for (unsigned k = 1; k <= N; ++k)
        binom[k] = binom[k - 1] * Rational(int(N - k + 1), int(k));
    for (int m = reach.z.lo; m <= reach.z.hi; ++m)
        for (int n = reach.w.lo; n <= reach.w.hi; ++n) {
            LoopElement sum;
            for (unsigned k = 0; k <= N; ++k) {
                // z^k w^(N-k) with sign (-1)^(N-k)
                Rational c = binom[k];
                if ((N - k) % 2 == 1)
                    c = -c;
                sum = sum + c * a.coeff(m - int(k), n - int(N - k));
            }
            out.set(m, n, sum);
        }
    return out;
}

// (z - w)^N a = 0 on the shrunk validity region?
inline bool is_local(const Distribution2& a, unsigned N)
{
    Distribution2 b = mul_z_minus_w_pow(a, N);
    if (b.validity().empty())
        throw RegionExhausted("is_local: truncation left nothing to check");
    return b.zero_on_validity();
}

// Res_z a = coefficient of z^{-1}, as a one-variable distribution.
inline Distribution1 residue_z(const Distribution2& a)
{
    IndexWindow v = a.validity().z.contains(-1) ? a.validity().w : IndexWindow{0, -1};
    Distribution1 out(v);
    if (!a.validity().z.contains(-1))
        return out;
    for (const auto& [mn, e] : a.coeffs())
        if (mn.first == -1)
            out.set(mn.second, e);
    out.restrict_validity(v);
    return out;
}

// c^j(w) = Res_z (z - w)^j a(z,w) for j = 0..max_order, checked against the
// reconstruction sum_j c^j(w) d_w^j delta(z,w) / j! on the common validity.
inline std::vector<Distribution1> decompose_local(const Distribution2& a, unsigned max_order)
{
    std::vector<Distribution1> cs;
    for (unsigned j = 0; j <= max_order; ++j)
        cs.push_back(residue_z(mul_z_minus_w_pow(a, j)));

    // reconstruction check
    Rational factorial(1);
    std::vector<Rational> inv_fact;
    for (unsigned j = 0; j <= max_order; ++j) {
        if (j > 0)
            factorial *= Rational(int(j));
        inv_fact.push_back(Rational(1) / factorial);
    }
    bool compared_any = false;
    for (int m = a.validity().z.lo; m <= a.validity().z.hi; ++m)
        for (int n = a.validity().w.lo; n <= a.validity().w.hi; ++n) {
            LoopElement recon;
            bool exact = true;
            for (unsigned j = 0; j <= max_order && exact; ++j) {
                int src = n + m + 1 + int(j); // w-exponent of c^j hit by d_w^j delta
                if (!cs[j].validity().contains(src)) {
                    exact = false;
                    break;
                }
                Rational f(1);
                for (unsigned t = 1; t <= j; ++t)
                    f *= Rational(-m - int(t));
                recon = recon + (f * inv_fact[j]) * cs[j].coeff(src);
            }
            if (!exact)
                continue;
            compared_any = true;
            if (!(recon == a.coeff(m, n)))
                throw NotLocal("decompose_local: reconstruction mismatch at (z^" +
                               std::to_string(m) + ", w^" + std::to_string(n) + ")");
        }
    if (!compared_any)
        throw RegionExhausted("decompose_local: no exact points left to verify");
    return cs;
}

// F^lambda_{z,w} a = sum_j (lambda^j / j!) Res_z (z-w)^j a, kept as a
// lambda-power-indexed family of one-variable distributions.
struct LambdaDistribution1 {
    std::map<unsigned, Distribution1> powers; // j -> coefficient of lambda^j (already / j!)
};

inline LambdaDistribution1 fourier_lambda(const Distribution2& a, unsigned max_order)
{
    if (!is_local(a, max_order + 1))
        throw NotLocal("fourier_lambda: not local at order " + std::to_string(max_order + 1));
    LambdaDistribution1 out;
    Rational factorial(1);
    for (unsigned j = 0; j <= max_order; ++j) {
        if (j > 0)
            factorial *= Rational(int(j));
        Distribution1 cj = residue_z(mul_z_minus_w_pow(a, j));
        Distribution1 scaled(cj.validity());
        for (const auto& [n, e] : cj.coeffs())
            scaled.set(n, (Rational(1) / factorial) * e);
        scaled.restrict_validity(cj.validity());
        out.powers[j] = std::move(scaled);
    }
    return out;
}

// h(d_w) applied to L_k(w), evaluated pointwise from the expansion formula:
// coefficient of w^n in d_w^r L_k(w) picks alpha = -n-2-r with the falling
// factor (-alpha-2)(-alpha-3)...(-alpha-2-r+1).
inline LoopElement partial_pattern_coeff(const MultiPoly& h, int k, int n)
{
    LoopElement out;
    auto deg = h.degree_in(vars::partial);
    if (!deg)
        return out;
    for (int r = 0; r <= *deg; ++r) {
        MultiPoly hr = h.coefficient_of(vars::partial, r);
        if (hr.is_zero())
            continue;
        if (!hr.is_constant())
            throw Error("partial_pattern_coeff: coefficient is not rational");
        int alpha = -n - 2 - r;
        Rational f(1);
        for (int t = 0; t < r; ++t)
            f *= Rational(-alpha - 2 - t);
        out.add(LoopSym{false, alpha, k}, hr.constant_value() * f);
    }
    return out;
}

// Matches a loop-valued distribution against sum_k h_k(d_w) L_k(w) on its
// validity interval; throws if no polynomial family fits exactly.
inline std::map<int, MultiPoly> recognize_partial_expansion(const Distribution1& dist)
{
    if (dist.validity().empty())
        throw RegionExhausted("recognize_partial_expansion: empty validity");
    std::map<int, std::map<int, Rational>> h; // loop index -> d-power -> coefficient
    for (const auto& [n, e] : dist.coeffs()) {
        if (!dist.validity().contains(n))
            continue;
        for (const auto& [sym, q] : e.terms()) {
            if (sym.scalar)
                throw Error("recognize_partial_expansion: scalar component present");
            int r = -sym.alpha - 2 - n;
            if (r < 0)
                throw Error("recognize_partial_expansion: exponent pattern out of range");
            Rational f(1);
            for (int t = 0; t < r; ++t)
                f *= Rational(-sym.alpha - 2 - t);
            if (f.is_zero())
                continue; // degenerate alpha carries no information
            Rational cand = q / f;
            auto [it, fresh] = h[sym.index].try_emplace(r, cand);
            if (!fresh && it->second != cand)
                throw Error("recognize_partial_expansion: inconsistent coefficients");
        }
    }
    std::map<int, MultiPoly> out;
    for (const auto& [k, by_r] : h) {
        MultiPoly hk;
        for (const auto& [r, q] : by_r)
            hk += MultiPoly(q) * MultiPoly::variable(vars::partial).pow(unsigned(r));
        if (!hk.is_zero())
            out[k] = hk;
    }
    // authoritative verification: regenerate and compare on the validity interval
    for (int n = dist.validity().lo; n <= dist.validity().hi; ++n) {
        LoopElement expect;
        for (const auto& [k, hk] : out)
            expect = expect + partial_pattern_coeff(hk, k, n);
        if (!(expect == dist.coeff(n)))
            throw Error("recognize_partial_expansion: verification failed at w^" +
                        std::to_string(n));
    }
    return out;
}

// Reads the whole Fourier transform as an abstract lambda-bracket value:
// sum over powers j of lambda^j * (recognized element of power j).
inline LambdaValue fourier_as_lambda_value(const LambdaDistribution1& f)
{
    LambdaValue out;
    for (const auto& [j, dist] : f.powers) {
        if (dist.zero_on_validity())
            continue;
        MultiPoly lam_pow = MultiPoly::variable(vars::lambda).pow(j);
        for (const auto& [k, hk] : recognize_partial_expansion(dist))
            out.add(k, lam_pow * hk);
    }
    return out;
}

} // namespace confal
