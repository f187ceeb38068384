#include "arithdyn/qpoly.hpp"

#include <doctest.h>

#include <random>

using namespace arithdyn::qpoly;

namespace {

Polynomial P(const char *text, std::size_t n = 2) { return parse_polynomial(text, n); }

Polynomial random_poly(std::mt19937_64 &rng, std::size_t n, unsigned max_deg, unsigned terms)
{
    Polynomial p(n);
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m(n);
        for (std::size_t i = 0; i < n; ++i)
            m[i] = static_cast<std::uint32_t>(rng() % (max_deg + 1));
        const long num = static_cast<long>(rng() % 19) - 9;
        const long den = static_cast<long>(rng() % 4) + 1;
        p.add_term(m, Rational(num, den));
    }
    return p;
}

std::vector<Rational> random_point(std::mt19937_64 &rng, std::size_t n)
{
    std::vector<Rational> pt;
    for (std::size_t i = 0; i < n; ++i) {
        Rational r(static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 5) + 1);
        r.canonicalize();
        pt.push_back(r);
    }
    return pt;
}

}  // namespace

TEST_CASE("rationals parse canonically")
{
    CHECK(parse_rational("4/6") == Rational(2, 3));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK_THROWS_AS(parse_rational("3/-6"), ParseError);
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK(bit_size(Rational(255, 8)) == 8 + 4);
}

TEST_CASE("addition")
{
    CHECK(P("x1 + x2") + P("-x2") == P("x1"));
    CHECK(P("x1^2 + 1") + Polynomial(2) == P("x1^2 + 1"));
    CHECK(P("x1^2 + 1") + P("x1^2 + 1") == P("2*x1^2 + 2"));
    CHECK((P("x1 + x2") - P("x1 + x2")).is_zero());
    CHECK_THROWS_AS(P("x1") + P("x1", 3), DimensionMismatch);
}

TEST_CASE("multiplication")
{
    CHECK(P("x1 + x2") * P("x1 - x2") == P("x1^2 - x2^2"));
    CHECK(P("x1^3 + x2") * Polynomial::constant(2, 1) == P("x1^3 + x2"));
    CHECK(P("x1^3 + x2") * P("x2^2 + 1") == P("x1^3*x2^2 + x1^3 + x2^3 + x2"));
    CHECK((P("x1 + 1") * Polynomial(2)).is_zero());
    CHECK(pow(P("x1 + 1"), 3) == P("x1^3 + 3*x1^2 + 3*x1 + 1"));
    CHECK(pow(P("x1 + x2"), 0) == Polynomial::constant(2, 1));
}

TEST_CASE("multiplication with large exponents leaves the packed path")
{
    // 2^40 exponents need more than 64 bits of packing for four variables.
    const auto big = Monomial(std::vector<std::uint32_t>{1u << 30, 1u << 30, 1u << 30, 1u << 30});
    const auto p = Polynomial::monomial(big, 3) + Polynomial::constant(4, 1);
    const auto sq = p * p;
    CHECK(sq.term_count() == 3);
    CHECK(sq.coefficient(big * big) == 9);
    CHECK(sq.coefficient(big) == 6);
}

TEST_CASE("evaluation")
{
    const auto f1 = P("x1^3 + x2");
    const std::vector<Rational> pt{Rational(1, 256), Rational(1, 2)};
    CHECK(evaluate(f1, pt) == Rational(1, 1 << 24) + Rational(1, 2));
    CHECK(evaluate(Polynomial::constant(2, Rational(7, 3)), pt) == Rational(7, 3));
    CHECK(evaluate(P("x1*x2"), std::vector<Rational>{Rational(2, 3), Rational(3, 2)}) == 1);
    CHECK_THROWS_AS(evaluate(f1, std::vector<Rational>{1}), DimensionMismatch);
}

TEST_CASE("substitution")
{
    CHECK(substitute(P("x1^2"), std::vector<Polynomial>{P("x1 + 1"), P("x2")}) == P("x1^2 + 2*x1 + 1"));
    const auto p = P("3/2*x1^2*x2 - x2^3 + 5");
    CHECK(substitute(p, std::vector<Polynomial>{P("x1"), P("x2")}) == p);
    // (x1^3 + x2)^3 + x2^2 + 1 expanded by hand.
    CHECK(substitute(P("x1^3 + x2"), std::vector<Polynomial>{P("x1^3 + x2"), P("x2^2 + 1")}) ==
          P("x1^9 + 3*x1^6*x2 + 3*x1^3*x2^2 + x2^3 + x2^2 + 1"));
}

TEST_CASE("degrees")
{
    CHECK(degree_in_var(P("x1^3 + x2"), 1) == 3);
    CHECK(degree_in_var(P("x1^3 + x2"), 2) == 1);
    CHECK(degree_in_var(Polynomial::constant(2, 5), 1) == 0);
    CHECK_THROWS_AS(degree_in_var(P("x1"), 3), std::out_of_range);
    CHECK(total_degree(P("x1^3 + x2")) == 3);
    CHECK(total_degree(P("x1*x2^2")) == 3);
    CHECK(total_degree(Polynomial(2)) == 0);
}

TEST_CASE("text form")
{
    CHECK(to_string(P("x2^2 + 3/2*x1^3*x2 - 1")) == "3/2*x1^3*x2 + x2^2 - 1");
    CHECK(to_string(Polynomial(3)) == "0");
    CHECK(to_string(P("-x1 + x1 + 2")) == "2");
    CHECK(P("2 * x1 * x1 * 3") == P("6*x1^2"));
    CHECK_THROWS_AS(P("x3"), ParseError);
    CHECK_THROWS_AS(P("x1 +"), ParseError);
    CHECK_THROWS_AS(P("x1^"), ParseError);
    CHECK_THROWS_AS(P("y1"), ParseError);
}

TEST_CASE("dominant term is stored first")
{
    const auto p = P("x1^2*x2 + x1^2 + x2^5");
    CHECK(p.terms().begin()->first == Monomial(std::vector<std::uint32_t>{2, 1}));
}

TEST_CASE("property: ring laws and evaluation homomorphism")
{
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto a = random_poly(rng, n, 3, 4);
        const auto b = random_poly(rng, n, 3, 4);
        const auto c = random_poly(rng, n, 2, 3);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());

        const auto pt = random_point(rng, n);
        CHECK(evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt));
        CHECK(evaluate(a + b, pt) == evaluate(a, pt) + evaluate(b, pt));

        std::vector<Polynomial> subs;
        std::vector<Rational> sub_values;
        for (std::size_t i = 0; i < n; ++i) {
            subs.push_back(random_poly(rng, n, 2, 3));
            sub_values.push_back(evaluate(subs.back(), pt));
        }
        CHECK(evaluate(substitute(a, subs), pt) == evaluate(a, sub_values));

        CHECK(parse_polynomial(to_string(a), n) == a);
        if (!a.is_zero() && !b.is_zero())
            CHECK(total_degree(a * b) == total_degree(a) + total_degree(b));
    }
}
