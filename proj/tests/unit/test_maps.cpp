#include "arithdyn/maps.hpp"

#include <doctest.h>

#include <sstream>

using namespace arithdyn;
using namespace arithdyn::maps;
using qpoly::parse_polynomial;

namespace {

TriangularMap M(std::vector<const char *> comps)
{
    std::vector<Polynomial> ps;
    for (auto *c : comps)
        ps.push_back(parse_polynomial(c, comps.size()));
    return TriangularMap::validate(std::move(ps));
}

const TriangularMap E1 = M({"x1^3 + x2", "x2^2 + 1"});

}  // namespace

TEST_CASE("validation")
{
    CHECK(E1.dimension() == 2);
    try {
        M({"x2", "x2^2"});
        FAIL("expected NotDominant");
    } catch (const NotDominant &e) {
        CHECK(e.component() == 1);
    }
    try {
        M({"x1 + x2", "x1^2"});
        FAIL("expected NotTriangular");
    } catch (const NotTriangular &e) {
        CHECK(e.component() == 2);
        CHECK(e.variable() == 1);
    }
    CHECK_THROWS_AS(TriangularMap::validate({}), std::invalid_argument);
    // Triangularity is checked before dominance.
    CHECK_THROWS_AS(M({"x2", "x1"}), NotTriangular);
}

TEST_CASE("apply")
{
    CHECK(maps::apply(E1, {0, 0}) == AffinePoint{0, 1});
    const AffinePoint p{Rational(3, 7), Rational(-2, 5)};
    CHECK(maps::apply(TriangularMap::identity(2), p) == p);
    CHECK(maps::apply(E1, {Rational(1, 256), Rational(1, 2)}) ==
          AffinePoint{Rational(1, 1 << 24) + Rational(1, 2), Rational(5, 4)});
    CHECK_THROWS_AS(maps::apply(E1, {1}), qpoly::DimensionMismatch);
}

TEST_CASE("composition and iteration")
{
    CHECK(iterate_symbolic(E1, 1) == E1);
    const auto f2 = iterate_symbolic(E1, 2);
    CHECK(f2 == M({"x1^9 + 3*x1^6*x2 + 3*x1^3*x2^2 + x2^3 + x2^2 + 1", "x2^4 + 2*x2^2 + 2"}));
    CHECK(qpoly::degree_in_var(f2.component(1), 1) == 9);
    CHECK(qpoly::degree_in_var(f2.component(2), 2) == 4);

    // Point-wise oracle: f^3(P) = f(f(f(P))).
    const auto f3 = iterate_symbolic(E1, 3);
    const AffinePoint p{Rational(2, 3), Rational(-1, 2)};
    CHECK(maps::apply(f3, p) == maps::apply(E1, maps::apply(E1, maps::apply(E1, p))));

    const auto g = M({"x1 + x2^2", "2*x2"});
    CHECK(maps::apply(compose(E1, g), p) == maps::apply(E1, maps::apply(g, p)));
    CHECK_THROWS_AS(iterate_symbolic(E1, 0), std::invalid_argument);
}

TEST_CASE("resource caps are reported, never truncated")
{
    ResourceLimits tight;
    tight.max_terms = 10;
    try {
        iterate_symbolic(E1, 4, tight);
        FAIL("expected ResourceExceeded");
    } catch (const ResourceExceeded &e) {
        CHECK(e.last_safe() >= 1);
        CHECK(e.last_safe() < 4);
    }

    ResourceLimits bits;
    bits.max_coefficient_bits = 64;
    try {
        orbit(M({"x1^2"}), {2}, 10, bits);
        FAIL("expected OrbitResourceExceeded");
    } catch (const OrbitResourceExceeded &e) {
        // 2^(2^n) fits 64 bits (plus the denominator bit) up to n = 5.
        CHECK(e.partial().points.size() == 6);
        CHECK(e.partial().points.back()[0] == Rational(mpz_class(1) << 32));
    }
}

TEST_CASE("product map")
{
    const auto f = M({"x1^2"});
    const auto g = M({"x1^3 + x2", "x2^2 + 1"});
    const auto fg = product_map(f, g);
    CHECK(fg.dimension() == 3);
    const AffinePoint p{2, Rational(1, 2), 3};
    CHECK(maps::apply(fg, p) == AffinePoint{4, Rational(1, 8) + 3, 10});
}

TEST_CASE("orbits")
{
    const AffinePoint fixed{0, 1};
    const auto fix_map = M({"x1^3", "x2"});
    const auto o = orbit(fix_map, fixed, 4);
    for (const auto &pt : o.points)
        CHECK(pt == fixed);

    const auto sq = M({"x1^2"});
    const auto o2 = orbit(sq, {2}, 3);
    CHECK(o2.points == std::vector<AffinePoint>{{2}, {4}, {16}, {256}});
    const auto o3 = orbit(sq, {3}, 3);
    CHECK(orbits_disjoint_prefix(o2, o3));
    CHECK_FALSE(orbits_disjoint_prefix(o2, orbit(sq, {2}, 3)));
    CHECK_FALSE(orbits_disjoint_prefix(o2, orbit(sq, o2.points[1], 3)));

    const auto e = orbit(E1, {Rational(1, 256), Rational(1, 2)}, 1);
    CHECK(e.points[1] == AffinePoint{Rational(1, 1 << 24) + Rational(1, 2), Rational(5, 4)});
}

TEST_CASE("wire format round trip")
{
    const auto text = map_to_json(E1);
    CHECK(map_from_json(text) == E1);
    CHECK(map_from_json(R"({"dimension": 1, "components": ["x1^2 - 1/3"]})") == M({"x1^2 - 1/3"}));
    CHECK_THROWS_AS(map_from_json(R"({"dimension": 2, "components": ["x1"]})"), std::invalid_argument);
    CHECK_THROWS_AS(map_from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(map_from_json(R"({"dimension": 2, "components": ["x2", "x2^2"]})"), NotDominant);
}

TEST_CASE("orbit csv")
{
    std::ostringstream os;
    write_orbit_csv(os, orbit(E1, {Rational(1, 256), Rational(-1, 2)}, 1));
    CHECK(os.str() == "n,x1_num,x1_den,x2_num,x2_den\n"
                      "0,1,256,-1,2\n"
                      "1,-8388607,16777216,5,4\n");
}
