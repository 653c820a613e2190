#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confal/formal_dist.hpp"

using namespace confal;

namespace {
MultiPoly D() { return MultiPoly::variable(vars::partial); }
MultiPoly L() { return MultiPoly::variable(vars::lambda); }

// compares two one-variable distributions on the intersection of their
// validity intervals, which must be nonempty
bool equal_on_validity(const Distribution1& x, const Distribution1& y)
{
    int lo = std::max(x.validity().lo, y.validity().lo);
    int hi = std::min(x.validity().hi, y.validity().hi);
    REQUIRE(lo <= hi);
    for (int n = lo; n <= hi; ++n)
        if (!(x.coeff(n) == y.coeff(n)))
            return false;
    return true;
}

// h(d_w) L_k(w) generated directly from the expansion formula, exact at
// every exponent
Distribution1 pattern(const MultiPoly& h, int k, IndexWindow exps)
{
    Distribution1 d(exps);
    for (int n = exps.lo; n <= exps.hi; ++n)
        d.set(n, partial_pattern_coeff(h, k, n));
    d.restrict_validity(exps);
    return d;
}
} // namespace

TEST_CASE("L-distribution bookkeeping")
{
    Distribution1 d = make_L_distribution(0, {-1, 1});
    CHECK(d.coeff(-1) == LoopElement::basis(-1, 0));
    CHECK(d.coeff(-2) == LoopElement::basis(0, 0));
    CHECK(d.coeff(-3) == LoopElement::basis(1, 0));
    CHECK(d.coeff(0).is_zero());

    CHECK_THROWS_AS(make_L_distribution(0, IndexWindow(1, 0)), Error);

    Distribution1 e = make_L_distribution(5, {0, 0});
    CHECK(e.coeff(-2) == LoopElement::basis(0, 5));
}

TEST_CASE("delta distribution and its defining property")
{
    Distribution2 delta = make_delta({-2, 2});
    CHECK(delta.coeff(-2, 1) == LoopElement::unit());
    CHECK(delta.coeff(-1, 0) == LoopElement::unit());
    CHECK(delta.coeff(0, -1) == LoopElement::unit());
    CHECK(delta.coeff(1, -2) == LoopElement::unit());
    CHECK(delta.coeff(2, -3) == LoopElement::unit());
    CHECK(delta.coeff(0, 0).is_zero());

    CHECK(is_local(delta, 1)); // (z-w) delta = 0

    // Res_z delta collapses to the constant distribution 1
    Distribution1 res = residue_z(make_delta({-6, 6}));
    CHECK(res.coeff(0) == LoopElement::unit());
    for (int n = res.validity().lo; n <= res.validity().hi; ++n)
        if (n != 0)
            CHECK(res.coeff(n).is_zero());
}

TEST_CASE("bracket of L-distributions: degree bookkeeping and locality order")
{
    Distribution2 br = bracket_distributions(make_L_distribution(1, {-6, 6}),
                                             make_L_distribution(-1, {-6, 6}));
    for (const auto& [mn, e] : br.coeffs())
        for (const auto& [sym, q] : e.terms())
            CHECK(sym.index == 0); // loop degree adds up

    Distribution2 zero;
    Distribution1 z1;
    Distribution2 bz = bracket_distributions(make_L_distribution(0, {-3, 3}), z1);
    CHECK(bz.coeffs().empty());

    Distribution2 b00 = bracket_distributions(make_L_distribution(0, {-8, 8}),
                                              make_L_distribution(0, {-8, 8}));
    CHECK(is_local(b00, 2));
    CHECK_FALSE(is_local(b00, 1));
}

TEST_CASE("non-local pattern needs three powers")
{
    // sum z^i w^{-i-1} i^2, the second-derivative-like pattern
    Distribution2 a(Rect{{-8, 8}, {-9, 7}});
    for (int i = -8; i <= 8; ++i)
        a.set(i, -i - 1, LoopElement::unit(Rational(i) * Rational(i)));
    CHECK_FALSE(is_local(a, 1));
    CHECK(is_local(a, 3));
}

TEST_CASE("decomposition of the bracket matches the delta expansion")
{
    const int i = 2, j = -1;
    Distribution2 br = bracket_distributions(make_L_distribution(i, {-8, 8}),
                                             make_L_distribution(j, {-8, 8}));
    auto cs = decompose_local(br, 2);
    REQUIRE(cs.size() == 3);

    Distribution1 c0_expect = pattern(-D(), i + j, cs[0].validity());
    CHECK(equal_on_validity(cs[0], c0_expect));
    Distribution1 c1_expect = pattern(MultiPoly(-2), i + j, cs[1].validity());
    CHECK(equal_on_validity(cs[1], c1_expect));
    CHECK(cs[2].zero_on_validity());
}

TEST_CASE("decomposition of delta and its derivative")
{
    auto cs = decompose_local(make_delta({-8, 8}), 1);
    CHECK(cs[0].coeff(0) == LoopElement::unit());
    for (int n = cs[0].validity().lo; n <= cs[0].validity().hi; ++n)
        if (n != 0)
            CHECK(cs[0].coeff(n).is_zero());
    CHECK(cs[1].zero_on_validity());

    auto ds = decompose_local(make_delta_derivative(1, {-8, 8}), 2);
    CHECK(ds[0].zero_on_validity());
    CHECK(ds[1].coeff(0) == LoopElement::unit());
    for (int n = ds[1].validity().lo; n <= ds[1].validity().hi; ++n)
        if (n != 0)
            CHECK(ds[1].coeff(n).is_zero());
    CHECK(ds[2].zero_on_validity());
}

TEST_CASE("fourier transform rederives the lambda bracket")
{
    auto cw = loop_virasoro();
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            Distribution2 br = bracket_distributions(make_L_distribution(i, {-8, 8}),
                                                     make_L_distribution(j, {-8, 8}));
            LambdaDistribution1 f = fourier_lambda(br, 3);
            LambdaValue got = fourier_as_lambda_value(f);
            LambdaValue expect = bracket(cw, ConformalElement::basis(i),
                                         ConformalElement::basis(j), vars::lambda);
            CHECK(got == expect);
        }
}

TEST_CASE("fourier of delta is 1; fourier of zero is 0")
{
    LambdaDistribution1 f = fourier_lambda(make_delta({-8, 8}), 2);
    CHECK(f.powers.at(0).coeff(0) == LoopElement::unit());
    for (int n = f.powers.at(0).validity().lo; n <= f.powers.at(0).validity().hi; ++n)
        if (n != 0)
            CHECK(f.powers.at(0).coeff(n).is_zero());
    CHECK(f.powers.at(1).zero_on_validity());
    CHECK(f.powers.at(2).zero_on_validity());

    Distribution2 zero(Rect{{-4, 4}, {-4, 4}});
    LambdaDistribution1 fz = fourier_lambda(zero, 2);
    for (const auto& [j, dist] : fz.powers)
        CHECK(dist.zero_on_validity());
    CHECK(fourier_as_lambda_value(fz).is_zero());
}

TEST_CASE("region exhaustion is reported")
{
    Distribution2 tiny(Rect{{0, 1}, {0, 1}});
    tiny.set(0, 0, LoopElement::unit());
    CHECK_THROWS_AS(is_local(tiny, 3), RegionExhausted);
}

TEST_CASE("recognizer rejects non-expansion data")
{
    // an isolated coefficient at a positive exponent cannot come from any
    // h(d_w) L_k(w) with polynomial h
    Distribution1 d(IndexWindow{0, 2});
    d.set(0, LoopElement::basis(5, 0));
    d.restrict_validity({0, 2});
    CHECK_THROWS_AS(recognize_partial_expansion(d), Error);
}
