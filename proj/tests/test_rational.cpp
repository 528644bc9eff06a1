#include <catch2/catch_amalgamated.hpp>

#include "bgg/rational.hpp"

using namespace bgg;

TEST_CASE("rational parsing accepts integers and fractions") {
    REQUIRE(parse_rational("3") == Rational(3));
    REQUIRE(parse_rational("-7") == Rational(-7));
    REQUIRE(parse_rational("1/2") == Rational(1, 2));
    REQUIRE(parse_rational("-3/4") == Rational(-3, 4));
    REQUIRE(parse_rational("2/4") == Rational(1, 2));
    REQUIRE(parse_rational("6/-4") == Rational(-3, 2));
}

TEST_CASE("rational parsing rejects garbage") {
    REQUIRE_THROWS_AS(parse_rational(""), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_rational("--2"), std::invalid_argument);
}

TEST_CASE("vector helpers") {
    Vec3 a = vec3(1, 2, 3), b = vec3(Rational(1, 2), -1, 0);
    REQUIRE(dot(a, b) == Rational(-3, 2));
    REQUIRE(cross(vec3(1, 0, 0), vec3(0, 1, 0)) == vec3(0, 0, 1));
    REQUIRE(perp2d(vec3(2, 5)) == vec3(-5, 2));
    REQUIRE(dot(perp2d(a), a) == 0);
    REQUIRE(is_zero_vec(a - a));
    REQUIRE(sign_of(Rational(-2, 7)) == -1);
    REQUIRE(sign_of(Rational(0)) == 0);
    REQUIRE(to_string(Rational(-3, 6)) == "-1/2");
}
