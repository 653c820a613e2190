#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "confal/poly.hpp"
#include "confal/poly_io.hpp"
#include "confal/random_gen.hpp"

using namespace confal;

namespace {
MultiPoly D() { return MultiPoly::variable(vars::partial); }
MultiPoly L() { return MultiPoly::variable(vars::lambda); }
MultiPoly M() { return MultiPoly::variable(vars::mu); }
MultiPoly A() { return MultiPoly::variable(vars::par_a); }
MultiPoly B() { return MultiPoly::variable(vars::par_b); }
} // namespace

TEST_CASE("bigint arithmetic agrees with native 64-bit on small values")
{
    Rng rng(2024);
    for (int t = 0; t < 4000; ++t) {
        long long a = rng.range(-1000000, 1000000);
        long long b = rng.range(-1000000, 1000000);
        BigInt A(a), B(b);
        CHECK((A + B).to_string() == std::to_string(a + b));
        CHECK((A - B).to_string() == std::to_string(a - b));
        CHECK((A * B).to_string() == std::to_string(a * b));
        if (b != 0) {
            BigInt q, r;
            BigInt::divmod(A, B, q, r);
            CHECK(q.to_string() == std::to_string(a / b));
            CHECK(r.to_string() == std::to_string(a % b));
        }
        long long g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
        CHECK(BigInt::gcd(A, B).to_string() == std::to_string(g));
    }
}

TEST_CASE("bigint multi-limb division and string round trip")
{
    BigInt huge = BigInt::from_string("123456789012345678901234567890123456789");
    CHECK(huge.to_string() == "123456789012345678901234567890123456789");
    BigInt d = BigInt::from_string("987654321987654321");
    BigInt q, r;
    BigInt::divmod(huge, d, q, r);
    CHECK(q * d + r == huge);
    CHECK(BigInt::abs(r) < BigInt::abs(d));

    // reconstruction property across magnitudes
    Rng rng(7);
    for (int t = 0; t < 300; ++t) {
        BigInt a = BigInt::pow(BigInt(rng.range(2, 1000)), unsigned(rng.range(1, 9)));
        if (rng.chance(1, 2))
            a = -a;
        BigInt b = BigInt::pow(BigInt(rng.range(2, 1000)), unsigned(rng.range(1, 5)));
        BigInt::divmod(a, b, q, r);
        CHECK(q * b + r == a);
        CHECK(BigInt::abs(r) < BigInt::abs(b));
        CHECK(BigInt::from_string(a.to_string()) == a);
    }
}

TEST_CASE("rational canonical form")
{
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(0).to_string() == "0");
    CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
    CHECK(Rational(3, 2).pow(-2) == Rational(4, 9));
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("add: cancellation, identity, expansion")
{
    CHECK((D() + L()) + (-L()) == D());
    MultiPoly p = parse_poly("3*d^2 - l + 1/2");
    CHECK(MultiPoly() + p == p);
    CHECK((-D() - 2 * L()) + (-D() - 2 * M()) == -2 * D() - 2 * L() - 2 * M());
}

TEST_CASE("mul: identity and hand expansions")
{
    CHECK((M() - L()) * MultiPoly(1) == M() - L());
    CHECK(L() * (D() + 2 * L()) == L() * D() + 2 * L() * L());
    // (d-b)*(d-b+l) = d^2 - 2bd + ld + b^2 - bl
    MultiPoly lhs = (D() - B()) * (D() - B() + L());
    MultiPoly rhs = D() * D() - 2 * B() * D() + L() * D() + B() * B() - B() * L();
    CHECK(lhs == rhs);
}

TEST_CASE("substitute: shift arguments")
{
    MultiPoly p = -D() - 2 * M();
    CHECK(p.substitute(vars::partial, D() + L()) == -D() - L() - 2 * M());
    MultiPoly q = -D() - 2 * L();
    CHECK(q.substitute(vars::lambda, -L() - D()) == D() + 2 * L());
    MultiPoly r = parse_poly("a*d^3 - 2*l*d + 7");
    CHECK(r.substitute(vars::partial, D()) == r);
}

TEST_CASE("exact_divide: factor extraction and failure witness")
{
    CHECK((L() * D() + 2 * L() * L()).exact_divide(L()) == D() + 2 * L());
    MultiPoly p = parse_poly("a*l + b - d");
    CHECK(p.exact_divide(MultiPoly(1)) == p);
    CHECK_THROWS_AS((D() + L()).exact_divide(M()), NotDivisible);
    CHECK_THROWS_AS(p.exact_divide(MultiPoly()), std::domain_error);
}

TEST_CASE("degree_in and coefficient_of")
{
    CHECK(*(-D() - 2 * L()).degree_in(vars::partial) == 1);
    CHECK(!MultiPoly().degree_in(vars::lambda).has_value());
    CHECK(*((D() - B()) * (D() - B() + L())).degree_in(vars::partial) == 2);

    CHECK((-D() - 2 * L()).coefficient_of(vars::lambda, 1) == MultiPoly(-2));
    MultiPoly p = A() * L() + B() - D();
    CHECK(p.coefficient_of(vars::lambda, 0) == B() - D());
    CHECK(MultiPoly().coefficient_of(vars::partial, 3) == MultiPoly());
}

TEST_CASE("formal derivative")
{
    CHECK((D() - B()).pow(2).derivative(vars::partial) == 2 * D() - 2 * B());
    CHECK(L().derivative(vars::partial) == MultiPoly());
    CHECK(D().pow(3).derivative(vars::partial) == 3 * D().pow(2));
}

TEST_CASE("parse matches constructed values")
{
    CHECK(parse_poly("-d - 2*l") == -D() - 2 * L());
    CHECK(parse_poly("a*l + b - d") == A() * L() + B() - D());
    CHECK(parse_poly("(m - l)*(d + 1)^2") == (M() - L()) * (D() + 1) * (D() + 1));
    CHECK(parse_poly("3/2") == MultiPoly(Rational(3, 2)));
    CHECK(parse_poly("0") == MultiPoly());
}

TEST_CASE("parse errors carry a position")
{
    CHECK_THROWS_AS(parse_poly("d + "), SyntaxError);
    CHECK_THROWS_AS(parse_poly("d ^ l"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("(d"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("1/0"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("d @ l"), SyntaxError);
    try {
        parse_poly("d + $");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
}

TEST_CASE("rendering canonical forms")
{
    CHECK((-D() - 2 * L()).to_string() == "-d - 2*l");
    CHECK(MultiPoly().to_string() == "0");
    CHECK((A() * L() + B() - D()).to_string() == "a*l - d + b");
    CHECK((MultiPoly(Rational(3, 2)) * L()).to_string() == "3/2*l");
}

TEST_CASE("laurent reduction along c*cinv = 1")
{
    MultiPoly c = MultiPoly::variable(vars::par_c);
    MultiPoly cinv = MultiPoly::variable(vars::par_cinv);
    CHECK(c * cinv == MultiPoly(1));
    CHECK(MultiPoly::c_power(3) * MultiPoly::c_power(-5) == MultiPoly::c_power(-2));
    CHECK(MultiPoly::c_power(-2) == cinv * cinv);
    // division that crosses the unit: (c * d) / cinv = c^2 * d
    CHECK((c * D()).exact_divide(cinv) == MultiPoly::c_power(2) * D());
    CHECK((cinv * D() + c * L()).exact_divide(cinv) == D() + MultiPoly::c_power(2) * L());
}

TEST_CASE("ring axioms on random triples")
{
    Rng rng(42);
    std::vector<VarId> vs{vars::partial, vars::lambda, vars::mu, vars::par_a, vars::par_b};
    for (int t = 0; t < 1000; ++t) {
        MultiPoly p = rng.poly(vs, 6, 5);
        MultiPoly q = rng.poly(vs, 6, 5);
        MultiPoly r = rng.poly(vs, 6, 5);
        CHECK((p + q) + r == p + (q + r));
        CHECK(p + q == q + p);
        CHECK((p * q) * r == p * (q * r));
        CHECK(p * q == q * p);
        CHECK(p * (q + r) == p * q + p * r);
    }
}

TEST_CASE("substitution, division and coefficient reconstruction properties")
{
    Rng rng(99);
    std::vector<VarId> vs{vars::partial, vars::lambda, vars::par_b};
    for (int t = 0; t < 400; ++t) {
        MultiPoly p = rng.poly(vs, 5, 6);
        VarId v = vs[size_t(rng.range(0, int(vs.size()) - 1))];
        CHECK(p.substitute(v, MultiPoly::variable(v)) == p);

        MultiPoly q = rng.nonzero_poly(vs, 4, 4);
        CHECK((p * q).exact_divide(q) == p);

        auto deg = p.degree_in(v);
        MultiPoly rebuilt;
        for (int k = 0; k <= (deg ? *deg : -1); ++k)
            rebuilt += p.coefficient_of(v, k) * MultiPoly::variable(v).pow(unsigned(k));
        CHECK(rebuilt == p);
    }
}

TEST_CASE("parse/render round trip on random polynomials")
{
    Rng rng(123);
    std::vector<VarId> vs{vars::partial, vars::lambda, vars::mu,
                          vars::nu,      vars::par_a,  vars::par_c};
    for (int t = 0; t < 500; ++t) {
        MultiPoly p = rng.poly(vs, 4, 7);
        MultiPoly back = parse_poly(p.to_string());
        CHECK(back == p);
        CHECK(back.to_string() == p.to_string());
    }
}
