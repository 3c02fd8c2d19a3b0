#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <stdexcept>

#include "idemlin/rational.hpp"

using idemlin::Rational;

TEST_CASE("construction normalizes sign and gcd") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(0, 7) == Rational());
    CHECK(Rational(42).den() == 1);
    CHECK(Rational(6, 3).num() == 2);
    CHECK(Rational(6, 3).den() == 1);
}

TEST_CASE("denominator is always positive") {
    CHECK(Rational(1, -2).den() == 2);
    CHECK(Rational(1, -2).num() == -1);
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("exact arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) - Rational(1, 3) == Rational(1, 6));
    CHECK(-Rational(3, 7) == Rational(-3, 7));
    CHECK(Rational(1, 3) + Rational(1, 3) + Rational(1, 3) == Rational(1));
    // Results reduce: 1/6 + 1/6 = 1/3, not 2/6.
    Rational r = Rational(1, 6) + Rational(1, 6);
    CHECK(r.num() == 1);
    CHECK(r.den() == 3);
}

TEST_CASE("comparisons are cross-denominator exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 4) <= Rational(1, 2));
    CHECK(Rational(1, 2) >= Rational(2, 4));
    CHECK(Rational(7, 3) > Rational(2));
    // A near-tie that would be lost in double precision.
    CHECK(Rational(1000000000000000001, 3) > Rational(1000000000000000000, 3));
}

TEST_CASE("overflow throws instead of wrapping") {
    const Rational big(INT64_MAX);
    CHECK_THROWS_AS(big + big, std::overflow_error);
    const Rational small(INT64_MIN + 1);
    CHECK_THROWS_AS(small + small, std::overflow_error);
    CHECK_THROWS_AS(-Rational(INT64_MIN), std::overflow_error);
    // Deep denominators overflow in the unreduced product.
    const Rational a(1, INT64_MAX);
    CHECK_THROWS_AS(a + Rational(1, INT64_MAX - 2), std::overflow_error);
    // ... but reducible results stay representable.
    CHECK(big + Rational(0) == big);
}

TEST_CASE("string form") {
    CHECK(Rational(3).str() == "3");
    CHECK(Rational(-1, 2).str() == "-1/2");
    CHECK(Rational().str() == "0");
}
