#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "confal/conformal.hpp"
#include "confal/errors.hpp"
#include "confal/poly.hpp"
#include "confal/random_gen.hpp"
#include "confal/report.hpp"

namespace confal {

// Free conformal module presented by structure coefficients
// L_i l v_j = f_{i,j}(d, l) v_{target(i,j)}. Graded modules live on an index
// window with target i + j; a rank-one module is the window {0} with every
// algebra index acting back onto the single generator.
class GradedConformalModule {
  public:
    using CoeffRule = std::function<MultiPoly(int, int)>;

    static GradedConformalModule graded(IndexWindow window, CoeffRule rule, std::string name = {})
    {
        return GradedConformalModule(window, true, std::move(rule), std::move(name));
    }
    static GradedConformalModule rank_one(CoeffRule rule, std::string name = {})
    {
        return GradedConformalModule(IndexWindow{0, 0}, false, std::move(rule), std::move(name));
    }

    const IndexWindow& window() const { return window_; }
    bool is_graded() const { return graded_; }
    const std::string& name() const { return name_; }

    int target(int i, int j) const { return graded_ ? i + j : j; }

    MultiPoly coeff(int i, int j) const
    {
        if (!window_.contains(j) || !window_.contains(target(i, j)))
            throw WindowExceeded("module coefficient (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") leaves the window");
        return rule_(i, j);
    }

    // admissible (i, j) pairs over the module window; for rank-one modules
    // the algebra index runs over `algebra_span`
    std::vector<std::pair<int, int>> admissible_pairs(IndexWindow algebra_span) const
    {
        std::vector<std::pair<int, int>> out;
        if (graded_) {
            for (int j = window_.lo; j <= window_.hi; ++j)
                for (int t = window_.lo; t <= window_.hi; ++t)
                    out.emplace_back(t - j, j);
        } else {
            for (int i = algebra_span.lo; i <= algebra_span.hi; ++i)
                out.emplace_back(i, 0);
        }
        return out;
    }

  private:
    GradedConformalModule(IndexWindow window, bool graded, CoeffRule rule, std::string name)
        : window_(window), graded_(graded), rule_(std::move(rule)), name_(std::move(name))
    {
    }

    IndexWindow window_;
    bool graded_;
    CoeffRule rule_;
    std::string name_;
};

namespace detail {
inline void require_parameter_poly(const MultiPoly& p, const char* what)
{
    for (VarId v : {vars::partial, vars::lambda, vars::mu, vars::nu})
        if (p.degree_in(v).value_or(0) > 0)
            throw Error(std::string(what) + " must not involve operator variables");
}
} // namespace detail

// Rank-one family: L_i l v = c^i (-d + a l + b) v. `c` is either a nonzero
// rational constant or the symbolic parameter c (negative powers then land
// on cinv).
inline GradedConformalModule make_V_abc(const MultiPoly& a, const MultiPoly& b, const MultiPoly& c,
                                        IndexWindow algebra_span = IndexWindow::symmetric(16))
{
    detail::require_parameter_poly(a, "a");
    detail::require_parameter_poly(b, "b");
    MultiPoly base = -MultiPoly::variable(vars::partial) + a * MultiPoly::variable(vars::lambda) + b;
    std::function<MultiPoly(long long)> c_pow;
    if (c.is_constant()) {
        Rational cv = c.constant_value();
        if (cv.is_zero())
            throw ZeroParameter("make_V_abc: c must be nonzero");
        c_pow = [cv](long long i) { return MultiPoly(cv.pow(i)); };
    } else if (c == MultiPoly::variable(vars::par_c)) {
        c_pow = [](long long i) { return MultiPoly::c_power(i); };
    } else {
        throw Error("make_V_abc: c must be a rational constant or the parameter c");
    }
    (void)algebra_span;
    return GradedConformalModule::rank_one(
        [base, c_pow](int i, int) { return c_pow(i) * base; }, "V_abc");
}

inline GradedConformalModule make_V_abc(const Rational& a, const Rational& b, const Rational& c)
{
    return make_V_abc(MultiPoly(a), MultiPoly(b), MultiPoly(c));
}

// Uniform graded family: L_i l v_j = -(d - b - a l) v_{i+j}.
inline GradedConformalModule make_V_ab(const MultiPoly& a, const MultiPoly& b,
                                       IndexWindow window = IndexWindow::symmetric(8))
{
    detail::require_parameter_poly(a, "a");
    detail::require_parameter_poly(b, "b");
    MultiPoly f = -(MultiPoly::variable(vars::partial) - b - a * MultiPoly::variable(vars::lambda));
    return GradedConformalModule::graded(window, [f](int, int) { return f; }, "V_ab");
}

inline GradedConformalModule make_V_ab(const Rational& a, const Rational& b,
                                       IndexWindow window = IndexWindow::symmetric(8))
{
    return make_V_ab(MultiPoly(a), MultiPoly(b), window);
}

// Sequence family over the window of A: the action on v_j into v_{i+j} is
// selected by the pair (A_j, A_{i+j}) of values in {0, -1}.
inline GradedConformalModule make_V_Ab(const std::map<int, int>& A, const MultiPoly& b)
{
    if (A.empty())
        throw BadSequence("make_V_Ab: empty sequence");
    detail::require_parameter_poly(b, "b");
    int lo = A.begin()->first, hi = A.rbegin()->first;
    for (int j = lo; j <= hi; ++j) {
        auto it = A.find(j);
        if (it == A.end())
            throw BadSequence("make_V_Ab: sequence has a gap at " + std::to_string(j));
        if (it->second != 0 && it->second != -1)
            throw BadSequence("make_V_Ab: entries must be 0 or -1");
    }
    MultiPoly d = MultiPoly::variable(vars::partial);
    MultiPoly l = MultiPoly::variable(vars::lambda);
    MultiPoly db = d - b;
    auto rule = [A, db, l](int i, int j) -> MultiPoly {
        int aj = A.at(j);
        int aij = A.at(i + j);
        if (aj == 0 && aij == 0)
            return -db;
        if (aj == -1 && aij == -1)
            return -(db + l);
        if (aj == 0 && aij == -1)
            return MultiPoly(-1);
        return -(db * (db + l)); // (aj, aij) = (-1, 0)
    };
    return GradedConformalModule::graded(IndexWindow{lo, hi}, rule, "V_Ab");
}

inline GradedConformalModule make_V_Ab(const std::map<int, int>& A, const Rational& b)
{
    return make_V_Ab(A, MultiPoly(b));
}

inline GradedConformalModule make_trivial_module(IndexWindow window)
{
    return GradedConformalModule::graded(window, [](int, int) { return MultiPoly(); }, "trivial");
}

// a l (b m v) - b m (a l v) = [a l b] l+m v on the basis triple, as an exact
// polynomial identity in (d, l, m).
inline CheckReport check_module_axiom(const GradedConformalAlgebra& alg,
                                      const GradedConformalModule& mod, int i, int j, int k)
{
    std::string id = "module(" + std::to_string(i) + "," + std::to_string(j) + "," +
                     std::to_string(k) + ")";
    MultiPoly l = MultiPoly::variable(vars::lambda);
    MultiPoly m = MultiPoly::variable(vars::mu);

    int jk = mod.target(j, k);
    int ik = mod.target(i, k);
    // lhs: [L_i l L_j] acting with bracket variable l+m
    std::map<int, MultiPoly> lhs;
    for (const auto& [p, P] : alg.structure_map(i, j)) {
        MultiPoly factor = P.substitute(vars::partial, -(l + m));
        MultiPoly f = mod.coeff(p, k).substitute(vars::lambda, l + m);
        int t = mod.target(p, k);
        auto [it, fresh] = lhs.try_emplace(t, factor * f);
        if (!fresh)
            it->second += factor * f;
    }
    // rhs: L_i l (L_j m v_k) - L_j m (L_i l v_k)
    MultiPoly r1 = shifted(mod.coeff(j, k).substitute(vars::lambda, m), vars::partial, l) *
                   mod.coeff(i, jk);
    MultiPoly r2 = shifted(mod.coeff(i, k), vars::partial, m) *
                   mod.coeff(j, ik).substitute(vars::lambda, m);
    std::map<int, MultiPoly> rhs;
    int t1 = mod.target(i, jk);
    int t2 = mod.target(j, ik);
    rhs[t1] = r1;
    auto [it, fresh] = rhs.try_emplace(t2, -r2);
    if (!fresh)
        it->second -= r2;

    for (auto clean : {&lhs, &rhs})
        for (auto iter = clean->begin(); iter != clean->end();)
            iter = iter->second.is_zero() ? clean->erase(iter) : std::next(iter);
    if (lhs != rhs) {
        std::vector<std::string> w;
        for (const auto& [t, p] : lhs)
            w.push_back("lhs v_" + std::to_string(t) + ": " + p.to_string());
        for (const auto& [t, p] : rhs)
            w.push_back("rhs v_" + std::to_string(t) + ": " + p.to_string());
        return CheckReport::fail(id, "module axiom fails", w);
    }
    return CheckReport::ok(id);
}

// Action of an algebra element sum f_i(d) L_i on a module element g(d) v_j.
inline std::map<int, MultiPoly> module_action(const GradedConformalModule& mod,
                                              const ConformalElement& x, const MultiPoly& g,
                                              int j, VarId lam = vars::lambda)
{
    detail::require_bracket_var(lam);
    MultiPoly lp = MultiPoly::variable(lam);
    std::map<int, MultiPoly> out;
    for (const auto& [i, f] : x.terms()) {
        MultiPoly part = f.substitute(vars::partial, -lp) * shifted(g, vars::partial, lp) *
                         mod.coeff(i, j).substitute(vars::lambda, lp);
        if (part.is_zero())
            continue;
        auto [it, fresh] = out.try_emplace(mod.target(i, j), part);
        if (!fresh) {
            it->second += part;
            if (it->second.is_zero())
                out.erase(it);
        }
    }
    return out;
}

// The two C[d]-compatibility rules of the action are definitional for the
// evaluator; this exercises it on random elements.
inline CheckReport check_sesquilinearity_action(const GradedConformalModule& mod, Rng& rng,
                                                int trials)
{
    std::vector<VarId> dvar{vars::partial};
    MultiPoly d = MultiPoly::variable(vars::partial);
    MultiPoly l = MultiPoly::variable(vars::lambda);
    for (int t = 0; t < trials; ++t) {
        int j = rng.range(mod.window().lo, mod.window().hi);
        int i = mod.is_graded() ? rng.range(mod.window().lo, mod.window().hi) - j
                                : rng.range(-4, 4);
        ConformalElement x = ConformalElement::single(i, rng.poly(dvar, 3, 3));
        MultiPoly g = rng.poly(dvar, 3, 3);

        auto base = module_action(mod, x, g, j);
        auto da = module_action(mod, d * x, g, j);
        std::map<int, MultiPoly> want;
        for (const auto& [idx, p] : base)
            if (!((-l) * p).is_zero())
                want[idx] = (-l) * p;
        if (da != want)
            return CheckReport::fail("sesquilinearity", "(d x) l v != -l (x l v) at trial " +
                                                            std::to_string(t));

        auto dv = module_action(mod, x, d * g, j);
        want.clear();
        for (const auto& [idx, p] : base)
            if (!((d + l) * p).is_zero())
                want[idx] = (d + l) * p;
        if (dv != want)
            return CheckReport::fail("sesquilinearity", "x l (d v) != (d+l)(x l v) at trial " +
                                                            std::to_string(t));
    }
    return CheckReport::ok("sesquilinearity", std::to_string(trials) + " random trials");
}

// Triples (i, j, k) whose every intermediate module index k, j+k, i+k,
// i+j+k stays inside the window; the axiom check is exhaustive over these.
inline std::vector<std::array<int, 3>> admissible_triples(IndexWindow w)
{
    std::vector<std::array<int, 3>> out;
    for (int k = w.lo; k <= w.hi; ++k)
        for (int jk = w.lo; jk <= w.hi; ++jk)
            for (int ik = w.lo; ik <= w.hi; ++ik) {
                int j = jk - k, i = ik - k;
                if (w.contains(i + j + k))
                    out.push_back({i, j, k});
            }
    return out;
}

// every structure coefficient on the window vanishes?
inline bool is_trivial(const GradedConformalModule& mod,
                       IndexWindow algebra_span = IndexWindow::symmetric(4))
{
    for (auto [i, j] : mod.admissible_pairs(algebra_span))
        if (!mod.coeff(i, j).is_zero())
            return false;
    return true;
}

// Basis change u_j = d_j v_j: new coefficients f'_{i,j} = (d_j / d_{i+j}) f_{i,j}.
inline GradedConformalModule change_basis(const GradedConformalModule& mod,
                                          const std::map<int, Rational>& d)
{
    for (int j = mod.window().lo; j <= mod.window().hi; ++j) {
        auto it = d.find(j);
        if (it == d.end())
            throw Error("change_basis: no scale for index " + std::to_string(j));
        if (it->second.is_zero())
            throw ZeroScale("change_basis: zero scale at index " + std::to_string(j));
    }
    GradedConformalModule base = mod;
    auto scale = d;
    auto rule = [base, scale](int i, int j) {
        Rational ratio = scale.at(j) / scale.at(base.target(i, j));
        return MultiPoly(ratio) * base.coeff(i, j);
    };
    if (mod.is_graded())
        return GradedConformalModule::graded(mod.window(), rule, mod.name() + "'");
    return GradedConformalModule::rank_one(rule, mod.name() + "'");
}

// Descriptor of a classified module.
struct ModuleDescriptor {
    enum class Kind { Trivial, RankOne, GradedUniform, GradedSequence };
    Kind kind = Kind::Trivial;
    MultiPoly a, b, c;          // RankOne uses a, b, c; graded kinds use a (uniform) and b
    std::map<int, int> sequence; // GradedSequence only, entries 0 / -1

    static ModuleDescriptor trivial()
    {
        return ModuleDescriptor{};
    }
    static ModuleDescriptor rank_one(MultiPoly a, MultiPoly b, MultiPoly c)
    {
        ModuleDescriptor m;
        m.kind = Kind::RankOne;
        m.a = std::move(a);
        m.b = std::move(b);
        m.c = std::move(c);
        return m;
    }
    static ModuleDescriptor graded_uniform(MultiPoly a, MultiPoly b)
    {
        ModuleDescriptor m;
        m.kind = Kind::GradedUniform;
        m.a = std::move(a);
        m.b = std::move(b);
        return m;
    }
    static ModuleDescriptor graded_sequence(std::map<int, int> A, MultiPoly b)
    {
        ModuleDescriptor m;
        m.kind = Kind::GradedSequence;
        m.sequence = std::move(A);
        m.b = std::move(b);
        return m;
    }

    GradedConformalModule instantiate(IndexWindow window = IndexWindow::symmetric(4)) const
    {
        switch (kind) {
        case Kind::Trivial: return make_trivial_module(window);
        case Kind::RankOne: return make_V_abc(a, b, c);
        case Kind::GradedUniform: return make_V_ab(a, b, window);
        case Kind::GradedSequence: return make_V_Ab(sequence, b);
        }
        throw Error("unreachable");
    }

    // constant sequences coincide with the uniform family
    ModuleDescriptor canonical() const
    {
        if (kind != Kind::GradedSequence || sequence.empty())
            return *this;
        int first = sequence.begin()->second;
        for (const auto& [j, v] : sequence)
            if (v != first)
                return *this;
        return graded_uniform(MultiPoly(first), b);
    }

    friend bool operator==(const ModuleDescriptor& x, const ModuleDescriptor& y)
    {
        ModuleDescriptor cx = x.canonical(), cy = y.canonical();
        return cx.kind == cy.kind && cx.a == cy.a && cx.b == cy.b && cx.c == cy.c &&
               cx.sequence == cy.sequence;
    }

    std::string to_string() const
    {
        switch (kind) {
        case Kind::Trivial: return "Trivial";
        case Kind::RankOne:
            return "RankOne(a=" + a.to_string() + ", b=" + b.to_string() + ", c=" + c.to_string() +
                   ")";
        case Kind::GradedUniform:
            return "GradedUniform(a=" + a.to_string() + ", b=" + b.to_string() + ")";
        case Kind::GradedSequence: {
            std::string s = "GradedSequence(A=[";
            bool first = true;
            for (const auto& [j, v] : sequence) {
                if (!first)
                    s += ",";
                s += std::to_string(v);
                first = false;
            }
            return s + "], b=" + b.to_string() + ")";
        }
        }
        return "?";
    }
};

} // namespace confal
