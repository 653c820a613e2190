// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every check is exact (rational arithmetic); the only tolerances are the
// stated wall-clock budgets.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "confal/cli.hpp"

using namespace confal;

namespace {

struct Gate {
    int failures = 0;

    void run(const std::string& name, const std::function<void()>& body)
    {
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (error.empty()) {
            std::cout << "PASS  " << name << "  (" << ms << " ms)\n";
        } else {
            std::cout << "FAIL  " << name << "  (" << ms << " ms): " << error << "\n";
            ++failures;
        }
    }
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what)
{
    if (!cond)
        throw Failure(what);
}

MultiPoly D() { return MultiPoly::variable(vars::partial); }
MultiPoly L() { return MultiPoly::variable(vars::lambda); }

std::map<int, int> random_sequence(Rng& rng, IndexWindow w)
{
    std::map<int, int> A;
    for (int j = w.lo; j <= w.hi; ++j)
        A[j] = rng.chance(1, 2) ? 0 : -1;
    return A;
}

// 1. skew-symmetry and Jacobi on [-6,6] as exact identities, under 5 s,
//    with all nine degree-<=1 single-monomial mutations detected
void criterion_axioms()
{
    auto start = std::chrono::steady_clock::now();
    auto cw = loop_virasoro();
    IndexWindow w = IndexWindow::symmetric(6);
    for (int i = w.lo; i <= w.hi; ++i)
        for (int j = w.lo; j <= w.hi; ++j)
            require(check_skew_symmetry(cw, i, j).pass,
                    "skew fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (int i = w.lo; i <= w.hi; ++i)
        for (int j = w.lo; j <= w.hi; ++j)
            for (int k = w.lo; k <= w.hi; ++k)
                require(check_jacobi(cw, i, j, k).pass, "jacobi fails at (" + std::to_string(i) +
                                                            "," + std::to_string(j) + "," +
                                                            std::to_string(k) + ")");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(secs < 5.0, "axiom sweep took " + std::to_string(secs) + " s, budget 5 s");

    MultiPoly base = -D() - 2 * L();
    std::vector<MultiPoly> monos{MultiPoly(1), D(), L()};
    int detected = 0;
    for (long long eps : {1LL, -1LL, 2LL})
        for (const auto& mono : monos) {
            MultiPoly P = base + Rational(eps) * mono;
            GradedConformalAlgebra mut(
                "mut", [P](int i, int j) { return std::vector<StructureTerm>{{i + j, P}}; }, {0});
            bool caught = false;
            for (int i = -2; i <= 2 && !caught; ++i)
                for (int j = -2; j <= 2 && !caught; ++j) {
                    caught = !check_skew_symmetry(mut, i, j).pass;
                    for (int k = -2; k <= 2 && !caught; ++k)
                        caught = !check_jacobi(mut, i, j, k).pass;
                }
            if (caught)
                ++detected;
        }
    require(detected == 9, "only " + std::to_string(detected) + "/9 mutations detected");
}

// 2. the distribution calculus rederives the lambda bracket: for |i|,|j| <= 3
//    with alpha band [-8,8], the Fourier transform of [L_i(z), L_j(w)] is
//    (-d-2l) L_{i+j}, the local decomposition is (-d_w L, -2 L, 0, ...), and
//    the locality order is exactly 2
void criterion_distributions()
{
    auto cw = loop_virasoro();
    IndexWindow band = IndexWindow::symmetric(8);
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            Distribution2 br =
                bracket_distributions(make_L_distribution(i, band), make_L_distribution(j, band));
            require(is_local(br, 2), "locality order 2 fails");
            require(!is_local(br, 1), "locality order 1 unexpectedly holds");

            LambdaValue got = fourier_as_lambda_value(fourier_lambda(br, 3));
            LambdaValue expect =
                bracket(cw, ConformalElement::basis(i), ConformalElement::basis(j), vars::lambda);
            require(got == expect, "fourier transform differs from the lambda bracket at (" +
                                       std::to_string(i) + "," + std::to_string(j) + ")");

            auto cs = decompose_local(br, 3);
            for (int n = cs[0].validity().lo; n <= cs[0].validity().hi; ++n)
                require(cs[0].coeff(n) == partial_pattern_coeff(-D(), i + j, n),
                        "c^0 is not -d_w L_{i+j}(w)");
            for (int n = cs[1].validity().lo; n <= cs[1].validity().hi; ++n)
                require(cs[1].coeff(n) == partial_pattern_coeff(MultiPoly(-2), i + j, n),
                        "c^1 is not -2 L_{i+j}(w)");
            require(cs[2].zero_on_validity() && cs[3].zero_on_validity(),
                    "c^j for j >= 2 is not zero");
        }
}

// 3. rank-one classification: the two functional equations have exactly the
//    expected solutions up to degree 10, the pipeline emits exactly
//    {Trivial, RankOne(a,b,c)}, and the family satisfies the module axiom
//    symbolically in (a, b, c)
void criterion_rank_one()
{
    SolverResult mult = solve_multiplicative(10);
    require(mult.scalar_candidates == std::vector<Rational>{Rational(0), Rational(-1)},
            "multiplicative equation solutions differ from {0, -1}");

    SolverResult de = solve_d_equation(10);
    require(de.dimension == 2, "d-equation dimension is not 2");
    bool has_one = false, has_l = false;
    for (const auto& v : de.basis) {
        if (v == MultiPoly(1))
            has_one = true;
        if (v == L())
            has_l = true;
        require(v.degree_in(vars::lambda).value_or(0) <= 1, "basis vector has degree > 1");
    }
    require(has_one && has_l, "basis is not {1, l}");

    ClassificationOutcome out = solve_rank_one(6);
    require(out.descriptors.size() == 2, "expected exactly two descriptors");
    require(out.descriptors[0].kind == ModuleDescriptor::Kind::Trivial, "missing Trivial");
    require(out.descriptors[1].kind == ModuleDescriptor::Kind::RankOne, "missing RankOne");

    auto cw = loop_virasoro();
    auto family = out.descriptors[1].instantiate();
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j)
            require(check_module_axiom(cw, family, i, j, 0).pass,
                    "symbolic module axiom fails at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
}

// 4. graded classification: >= 50 random sequence modules and >= 20 uniform
//    modules pass the module axiom on [-4,4], classify back to their exact
//    parameters, and are gauge invariant; under 30 s
void criterion_graded()
{
    auto start = std::chrono::steady_clock::now();
    auto cw = loop_virasoro();
    IndexWindow w = IndexWindow::symmetric(4);
    auto triples = admissible_triples(w);
    Rng rng(20260808);

    for (int t = 0; t < 50; ++t) {
        auto A = random_sequence(rng, w);
        Rational b = rng.rational();
        auto mod = make_V_Ab(A, b);
        for (const auto& [i, j, k] : triples)
            require(check_module_axiom(cw, mod, i, j, k).pass, "V_Ab fails the module axiom");
        ClassificationOutcome o = classify_graded(mod, w, 6);
        require(o.descriptors.size() == 1 &&
                    o.descriptors[0] == ModuleDescriptor::graded_sequence(A, MultiPoly(b)),
                "V_Ab descriptor not recovered exactly");

        std::map<int, Rational> d;
        for (int j2 = w.lo; j2 <= w.hi; ++j2)
            d[j2] = rng.nonzero_rational();
        ClassificationOutcome o2 = classify_graded(change_basis(mod, d), w, 6);
        require(o2.descriptors[0] == o.descriptors[0], "V_Ab descriptor not gauge invariant");
    }

    for (int t = 0; t < 20; ++t) {
        Rational a = rng.rational(), b = rng.rational();
        auto mod = make_V_ab(a, b, w);
        for (const auto& [i, j, k] : triples)
            require(check_module_axiom(cw, mod, i, j, k).pass, "V_ab fails the module axiom");
        ClassificationOutcome o = classify_graded(mod, w, 6);
        require(o.descriptors.size() == 1 &&
                    o.descriptors[0] ==
                        ModuleDescriptor::graded_uniform(MultiPoly(a), MultiPoly(b)),
                "V_ab descriptor not recovered exactly");

        std::map<int, Rational> d;
        for (int j2 = w.lo; j2 <= w.hi; ++j2)
            d[j2] = rng.nonzero_rational();
        ClassificationOutcome o2 = classify_graded(change_basis(mod, d), w, 6);
        require(o2.descriptors[0] == o.descriptors[0], "V_ab descriptor not gauge invariant");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(secs < 30.0, "graded sweep took " + std::to_string(secs) + " s, budget 30 s");
}

// 5. the pair case law reproduces exactly the three cases, rejects the
//    half-integer branch for n >= 1, and every emitted shape has zero
//    residual in the single-pair module equation
void criterion_case_law()
{
    MultiPoly b = MultiPoly::variable(vars::par_b);
    MultiPoly a = MultiPoly::variable(vars::par_a);

    auto sym = solve_pair_form(std::nullopt, std::nullopt, b);
    require(sym.size() == 1 && sym[0].case_id == 1 && sym[0].form == D() - b - a * L(),
            "symbolic case (1) not reproduced");
    require(pair_module_residual(sym[0].form, a, a, b).is_zero(), "case (1) residual nonzero");

    auto c2 = solve_pair_form(Rational(0), Rational(-1), b);
    require(c2.size() == 1 && c2[0].case_id == 2 && c2[0].form == MultiPoly(1),
            "case (2) not reproduced");
    require(pair_module_residual(c2[0].form, MultiPoly(0), MultiPoly(-1), b).is_zero(),
            "case (2) residual nonzero");

    auto c3 = solve_pair_form(Rational(-1), Rational(0), b);
    require(c3.size() == 1 && c3[0].case_id == 3 && c3[0].form == (D() - b) * (D() - b + L()),
            "case (3) not reproduced");
    require(pair_module_residual(c3[0].form, MultiPoly(-1), MultiPoly(0), b).is_zero(),
            "case (3) residual nonzero");

    for (int n = 1; n <= 5; ++n) {
        Rational ak = -Rational(2 * n + 1, 2), ajk = Rational(2 * n - 1, 2);
        bool rejected = false;
        try {
            solve_pair_form(ak, ajk, b);
        } catch (const NoSolution&) {
            rejected = true;
        }
        require(rejected, "half-integer branch n = " + std::to_string(n) + " not rejected");
        require((1LL << (2 * n)) * (3 - 2 * n) != 2 * n + 3,
                "scalar elimination check failed at n = " + std::to_string(n));
    }
    auto n0 = solve_pair_form(Rational(-1, 2), Rational(-1, 2), b);
    require(n0.size() == 1 && n0[0].case_id == 1, "n = 0 does not collapse to case (1)");
}

// 6. derivations: 100 random inner derivations pass Leibniz on [-4,4] and
//    round-trip exactly; 100 non-inner families fail; the constant family
//    raises NotDivisible
void criterion_derivations()
{
    auto cw = loop_virasoro();
    CheckReport rep = verify_der_equals_inn(cw, IndexWindow::symmetric(4), 5, 100, 0xC0FFEE);
    require(rep.pass, rep.message);

    DegreeComponent flat;
    flat.offset = 0;
    flat.window = IndexWindow::symmetric(4);
    for (int i = -4; i <= 4; ++i)
        flat.f[i] = MultiPoly(1);
    bool raised = false;
    try {
        extract_inner(cw, flat, flat.window, 5);
    } catch (const NotDivisible&) {
        raised = true;
    }
    require(raised, "constant family did not raise NotDivisible");
}

// 7. cocycle normalization: the -2^j table satisfies the identity and
//    normalizes to -1 through the constructed gauge; one perturbed entry
//    triggers CocycleViolated
void criterion_cocycle()
{
    IndexWindow w = IndexWindow::symmetric(4);
    std::map<std::pair<int, int>, Rational> table;
    for (int k = w.lo; k <= w.hi; ++k)
        for (int jk = w.lo; jk <= w.hi; ++jk)
            table[{jk - k, k}] = -Rational(2).pow(jk - k);
    auto d = normalize_cocycle(table, w);
    for (int k = w.lo; k <= w.hi; ++k)
        require(d.at(k) == Rational(2).pow(k), "gauge is not 2^k");
    for (int k = w.lo; k <= w.hi; ++k)
        for (int jk = w.lo; jk <= w.hi; ++jk)
            require(-table.at({jk - k, k}) * d.at(k) / d.at(jk) == Rational(1),
                    "normalized constant is not -1");

    table[{1, 1}] += Rational(1, 7);
    bool violated = false;
    try {
        normalize_cocycle(table, w);
    } catch (const CocycleViolated&) {
        violated = true;
    }
    require(violated, "perturbed table not flagged");
}

// 8. substrate soundness: ring axioms on 1000 random triples and the
//    parse/render round trip on 500 random polynomials
void criterion_poly_core()
{
    Rng rng(424242);
    std::vector<VarId> vs{vars::partial, vars::lambda, vars::mu, vars::par_a, vars::par_b};
    for (int t = 0; t < 1000; ++t) {
        MultiPoly p = rng.poly(vs, 6, 5), q = rng.poly(vs, 6, 5), r = rng.poly(vs, 6, 5);
        require((p + q) + r == p + (q + r), "associativity of + fails");
        require(p + q == q + p, "commutativity of + fails");
        require((p * q) * r == p * (q * r), "associativity of * fails");
        require(p * q == q * p, "commutativity of * fails");
        require(p * (q + r) == p * q + p * r, "distributivity fails");
    }
    std::vector<VarId> vs2{vars::partial, vars::lambda, vars::mu,
                           vars::nu,      vars::par_a,  vars::par_c};
    for (int t = 0; t < 500; ++t) {
        MultiPoly p = rng.poly(vs2, 4, 7);
        require(parse_poly(p.to_string()) == p, "parse/render round trip fails");
    }
}

} // namespace

int main()
{
    Gate gate;
    gate.run("1. loop algebra axioms on [-6,6] + mutation sensitivity", criterion_axioms);
    gate.run("2. distribution calculus rederives the lambda bracket", criterion_distributions);
    gate.run("3. rank-one classification pipeline", criterion_rank_one);
    gate.run("4. graded classification: recovery and gauge invariance", criterion_graded);
    gate.run("5. structure-coefficient case law", criterion_case_law);
    gate.run("6. derivations are inner at bounded degree", criterion_derivations);
    gate.run("7. cocycle normalization", criterion_cocycle);
    gate.run("8. polynomial substrate soundness", criterion_poly_core);

    if (gate.failures == 0) {
        std::cout << "acceptance: all 8 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << gate.failures << " criteria FAILED\n";
    return 1;
}
