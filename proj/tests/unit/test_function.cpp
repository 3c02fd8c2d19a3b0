#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "idemlin/function.hpp"

using namespace idemlin;

namespace {
SemiringValue q(std::int64_t n) { return SemiringValue::finite(Rational(n)); }

FiniteFunction fn(const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                  std::vector<int> levels) {
    std::vector<SemiringValue> vs;
    for (int v : levels) vs.push_back(sr.make_int(v));
    return FiniteFunction(X, sr, std::move(vs));
}
}  // namespace

TEST_CASE("numbered point sets") {
    auto X = PointSet::numbered(3);
    REQUIRE(X->size() == 3);
    CHECK(X->labels == std::vector<std::string>{"x1", "x2", "x3"});
    CHECK(X->index_of("x2") == 1);
    CHECK(X->index_of("y9") == PointSet::npos);
}

TEST_CASE("zero, impulse, and pointwise operations") {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();

    FiniteFunction z = zero_function(X, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(z.at(i).is_bottom());

    FiniteFunction e1 = impulse(X, b, 1);
    CHECK(e1.at(0).is_bottom());
    CHECK(e1.at(1) == b.one());
    CHECK(e1.at(2).is_bottom());

    FiniteFunction f = fn(X, b, {1, 0, 1});
    FiniteFunction g = fn(X, b, {0, 1, 1});
    CHECK(pointwise_sup(f, g) == fn(X, b, {1, 1, 1}));
    CHECK(pointwise_inf(f, g) == fn(X, b, {0, 0, 1}));
    CHECK(scalar_times(b.zero(), f) == z);
    CHECK(scalar_times(b.one(), f) == f);

    CHECK(function_leq(pointwise_inf(f, g), f));
    CHECK(function_leq(f, pointwise_sup(f, g)));
    CHECK_FALSE(function_leq(f, g));
}

TEST_CASE("scalar action on a chain is truncation") {
    auto X = PointSet::numbered(2);
    Semiring f3 = Semiring::fuzzy_chain(3);
    FiniteFunction f = fn(X, f3, {3, 1});
    CHECK(scalar_times(f3.make_int(2), f) == fn(X, f3, {2, 1}));
}

TEST_CASE("enumeration is mixed-radix with the first point least significant") {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    auto fns = enumerate_functions(X, b);
    REQUIRE(fns.size() == 8);
    CHECK(fns[0] == fn(X, b, {0, 0, 0}));
    CHECK(fns[1] == fn(X, b, {1, 0, 0}));
    CHECK(fns[2] == fn(X, b, {0, 1, 0}));
    CHECK(fns[3] == fn(X, b, {1, 1, 0}));
    CHECK(fns[4] == fn(X, b, {0, 0, 1}));
    CHECK(fns[7] == fn(X, b, {1, 1, 1}));
    for (std::size_t i = 0; i < fns.size(); ++i) CHECK(function_index(fns[i]) == i);
}

TEST_CASE("enumeration over a chain") {
    auto X = PointSet::numbered(2);
    Semiring f2 = Semiring::fuzzy_chain(2);
    auto fns = enumerate_functions(X, f2);
    REQUIRE(fns.size() == 9);
    CHECK(fns[1] == fn(X, f2, {1, 0}));
    CHECK(fns[2] == fn(X, f2, {2, 0}));
    CHECK(fns[3] == fn(X, f2, {0, 1}));
    CHECK(fns[8] == fn(X, f2, {2, 2}));
    for (std::size_t i = 0; i < fns.size(); ++i) CHECK(function_index(fns[i]) == i);
}

TEST_CASE("function space size and caps") {
    Semiring b = Semiring::boolean();
    CHECK(function_space_size(3, b, 1u << 10) == 8);
    CHECK(function_space_size(0, b, 1u << 10) == 1);
    CHECK_THROWS_AS(function_space_size(20, b, 1u << 10), CapExceeded);
    CHECK_THROWS_AS(enumerate_functions(PointSet::numbered(20), b, 100), CapExceeded);
}

TEST_CASE("function_less is a strict weak order compatible with equality") {
    auto X = PointSet::numbered(2);
    Semiring b = Semiring::boolean();
    auto fns = enumerate_functions(X, b);
    for (const auto& f : fns)
        for (const auto& g : fns) {
            if (f == g) {
                CHECK_FALSE(function_less(f, g));
                CHECK_FALSE(function_less(g, f));
            } else {
                CHECK(function_less(f, g) != function_less(g, f));
            }
        }
}

TEST_CASE("value mutation stays canonical") {
    auto X = PointSet::numbered(2);
    Semiring f2 = Semiring::fuzzy_chain(2);
    FiniteFunction f = zero_function(X, f2);
    f.set(0, f2.make_int(2));
    CHECK(f.at(0) == q(2));
    CHECK(f.at(1).is_bottom());
    CHECK(f.str() == "(2, 0)");
}
