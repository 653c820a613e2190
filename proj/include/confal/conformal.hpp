#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "confal/poly.hpp"
#include "confal/poly_io.hpp"
#include "confal/report.hpp"

namespace confal {

// One output of a basis bracket: P(d, l) attached to basis index `index`.
struct StructureTerm {
    int index;
    MultiPoly poly;
};

using BracketRule = std::function<std::vector<StructureTerm>(int, int)>;

// A Z-graded Lie conformal algebra presented by structure polynomials:
// [L_i l L_j] = sum_k P_{i,j,k}(d, l) L_k. The rule is a function of (i, j)
// so the infinite basis never has to be tabulated; every check quantifies
// over a caller-supplied window. `grading_offsets` is the set of k - (i + j)
// the rule is allowed to emit.
class GradedConformalAlgebra {
  public:
    GradedConformalAlgebra(std::string name, BracketRule rule, std::set<int> grading_offsets)
        : name_(std::move(name)), rule_(std::move(rule)),
          grading_offsets_(std::move(grading_offsets))
    {
    }

    const std::string& name() const { return name_; }
    const std::set<int>& grading_offsets() const { return grading_offsets_; }

    std::vector<StructureTerm> structure(int i, int j) const { return rule_(i, j); }

    std::map<int, MultiPoly> structure_map(int i, int j) const
    {
        std::map<int, MultiPoly> out;
        for (auto& t : rule_(i, j))
            if (!t.poly.is_zero())
                out[t.index] += t.poly;
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

  private:
    std::string name_;
    BracketRule rule_;
    std::set<int> grading_offsets_;
};

// Finite sum h_i(d) L_i; coefficients may involve parameters but no bracket
// variables.
class ConformalElement {
  public:
    ConformalElement() = default;

    static ConformalElement basis(int i)
    {
        ConformalElement x;
        x.terms_[i] = MultiPoly(1);
        return x;
    }
    static ConformalElement single(int i, MultiPoly h)
    {
        ConformalElement x;
        x.add(i, std::move(h));
        return x;
    }

    void add(int index, const MultiPoly& h)
    {
        if (h.is_zero())
            return;
        auto [it, fresh] = terms_.try_emplace(index, h);
        if (!fresh) {
            it->second += h;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    const std::map<int, MultiPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    friend ConformalElement operator+(const ConformalElement& x, const ConformalElement& y)
    {
        ConformalElement r = x;
        for (const auto& [i, h] : y.terms_)
            r.add(i, h);
        return r;
    }
    friend ConformalElement operator-(const ConformalElement& x, const ConformalElement& y)
    {
        ConformalElement r = x;
        for (const auto& [i, h] : y.terms_)
            r.add(i, -h);
        return r;
    }
    friend bool operator==(const ConformalElement& x, const ConformalElement& y)
    {
        return x.terms_ == y.terms_;
    }
    friend bool operator!=(const ConformalElement& x, const ConformalElement& y)
    {
        return !(x == y);
    }

    // multiplication by a polynomial in d (the free C[d]-module action)
    friend ConformalElement operator*(const MultiPoly& f, const ConformalElement& x)
    {
        ConformalElement r;
        for (const auto& [i, h] : x.terms_)
            r.add(i, f * h);
        return r;
    }

    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const auto& [i, h] : terms_) {
            if (!out.empty())
                out += " + ";
            out += "(" + h.to_string() + ") L_" + std::to_string(i);
        }
        return out;
    }

  private:
    std::map<int, MultiPoly> terms_;
};

// Value of a lambda-bracket: sum_k Q_k(d, lam) L_k for a chosen bracket
// variable lam in {l, m, n}.
struct LambdaValue {
    std::map<int, MultiPoly> terms;

    void add(int index, const MultiPoly& p)
    {
        if (p.is_zero())
            return;
        auto [it, fresh] = terms.try_emplace(index, p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }
    bool is_zero() const { return terms.empty(); }

    friend LambdaValue operator+(const LambdaValue& x, const LambdaValue& y)
    {
        LambdaValue r = x;
        for (const auto& [k, p] : y.terms)
            r.add(k, p);
        return r;
    }
    friend LambdaValue operator-(const LambdaValue& x, const LambdaValue& y)
    {
        LambdaValue r = x;
        for (const auto& [k, p] : y.terms)
            r.add(k, -p);
        return r;
    }
    friend LambdaValue operator*(const MultiPoly& f, const LambdaValue& x)
    {
        LambdaValue r;
        for (const auto& [k, p] : x.terms)
            r.add(k, f * p);
        return r;
    }
    friend bool operator==(const LambdaValue& x, const LambdaValue& y)
    {
        return x.terms == y.terms;
    }
    friend bool operator!=(const LambdaValue& x, const LambdaValue& y) { return !(x == y); }

    std::string to_string() const
    {
        if (terms.empty())
            return "0";
        std::string out;
        for (const auto& [k, p] : terms) {
            if (!out.empty())
                out += " + ";
            out += "(" + p.to_string() + ") L_" + std::to_string(k);
        }
        return out;
    }
};

namespace detail {
inline void require_bracket_var(VarId lam)
{
    if (lam != vars::lambda && lam != vars::mu && lam != vars::nu)
        throw std::invalid_argument("bracket variable must be l, m or n");
}
} // namespace detail

// Bilinear extension of the basis rule:
// [f(d)L_i lam g(d)L_j] = f(-lam) g(d + lam) [L_i lam L_j].
inline LambdaValue bracket(const GradedConformalAlgebra& alg, const ConformalElement& x,
                           const ConformalElement& y, VarId lam)
{
    detail::require_bracket_var(lam);
    MultiPoly lam_poly = MultiPoly::variable(lam);
    LambdaValue out;
    for (const auto& [i, f] : x.terms()) {
        MultiPoly f_neg = f.substitute(vars::partial, -lam_poly);
        for (const auto& [j, g] : y.terms()) {
            MultiPoly g_shift = shifted(g, vars::partial, lam_poly);
            MultiPoly factor = f_neg * g_shift;
            for (const auto& [k, P] : alg.structure_map(i, j)) {
                MultiPoly Pv = lam == vars::lambda ? P : P.substitute(vars::lambda, lam_poly);
                out.add(k, factor * Pv);
            }
        }
    }
    return out;
}

// P_{i,j}(d, l) = -P_{j,i}(d, -l - d) on every emitted basis index.
inline CheckReport check_skew_symmetry(const GradedConformalAlgebra& alg, int i, int j)
{
    std::string id = "skew(" + std::to_string(i) + "," + std::to_string(j) + ")";
    auto lhs = alg.structure_map(i, j);
    auto rhs = alg.structure_map(j, i);
    MultiPoly minus_l_minus_d =
        -MultiPoly::variable(vars::lambda) - MultiPoly::variable(vars::partial);
    std::set<int> indices;
    for (const auto& [k, P] : lhs)
        indices.insert(k);
    for (const auto& [k, Q] : rhs)
        indices.insert(k);
    for (int k : indices) {
        MultiPoly P = lhs.count(k) ? lhs.at(k) : MultiPoly();
        MultiPoly Q = rhs.count(k) ? rhs.at(k) : MultiPoly();
        MultiPoly img = -Q.substitute(vars::lambda, minus_l_minus_d);
        if (P != img)
            return CheckReport::fail(id, "skew-symmetry fails at output index " + std::to_string(k),
                                     {P.to_string(), img.to_string()});
    }
    return CheckReport::ok(id);
}

// Jacobi identity on a basis triple, as an exact identity in (d, l, m). The
// (l+m)-slot bracket is evaluated in the fresh variable n, then n := l + m.
inline CheckReport check_jacobi(const GradedConformalAlgebra& alg, int i, int j, int k)
{
    std::string id =
        "jacobi(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
    MultiPoly l = MultiPoly::variable(vars::lambda);
    MultiPoly m = MultiPoly::variable(vars::mu);
    MultiPoly n = MultiPoly::variable(vars::nu);

    // [L_i l [L_j m L_k]]
    LambdaValue lhs;
    for (const auto& [p, P] : alg.structure_map(j, k)) {
        MultiPoly Pm = P.substitute(vars::lambda, m);   // [L_j m L_k] coefficient on L_p
        MultiPoly Pshift = shifted(Pm, vars::partial, l); // pulled through d-multiplication
        for (const auto& [q, Q] : alg.structure_map(i, p))
            lhs.add(q, Pshift * Q);
    }

    // [[L_i l L_j] l+m L_k]
    LambdaValue mid;
    for (const auto& [p, R] : alg.structure_map(i, j)) {
        MultiPoly Rn = R.substitute(vars::partial, -n); // coefficient moves to -(bracket var)
        for (const auto& [q, S] : alg.structure_map(p, k)) {
            MultiPoly Sn = S.substitute(vars::lambda, n);
            mid.add(q, Rn * Sn);
        }
    }
    for (auto& [q, poly] : mid.terms)
        poly = poly.substitute(vars::nu, l + m);
    LambdaValue mid_clean;
    for (const auto& [q, poly] : mid.terms)
        mid_clean.add(q, poly);

    // [L_j m [L_i l L_k]]
    LambdaValue rhs2;
    for (const auto& [p, T] : alg.structure_map(i, k)) {
        MultiPoly Tshift = shifted(T, vars::partial, m);
        for (const auto& [q, U] : alg.structure_map(j, p)) {
            MultiPoly Um = U.substitute(vars::lambda, m);
            rhs2.add(q, Tshift * Um);
        }
    }

    LambdaValue rhs = mid_clean + rhs2;
    if (lhs != rhs)
        return CheckReport::fail(id, "Jacobi identity fails",
                                 {lhs.to_string(), rhs.to_string()});
    return CheckReport::ok(id);
}

// Every emitted index over the window obeys the grading offsets.
inline CheckReport check_graded(const GradedConformalAlgebra& alg, IndexWindow window)
{
    std::string id = "graded[" + std::to_string(window.lo) + "," + std::to_string(window.hi) + "]";
    for (int i = window.lo; i <= window.hi; ++i)
        for (int j = window.lo; j <= window.hi; ++j)
            for (const auto& [k, P] : alg.structure_map(i, j))
                if (!alg.grading_offsets().count(k - (i + j)))
                    return CheckReport::fail(
                        id,
                        "offset violation at (i,j,k) = (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")",
                        {P.to_string()});
    return CheckReport::ok(id);
}

// The loop Virasoro conformal algebra: [L_i l L_j] = (-d - 2l) L_{i+j}.
inline GradedConformalAlgebra loop_virasoro()
{
    MultiPoly P = -MultiPoly::variable(vars::partial) - 2 * MultiPoly::variable(vars::lambda);
    return GradedConformalAlgebra(
        "cw", [P](int i, int j) { return std::vector<StructureTerm>{{i + j, P}}; }, {0});
}

} // namespace confal
