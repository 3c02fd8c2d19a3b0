#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <stdexcept>
#include <vector>

#include "idemlin/operators.hpp"

using namespace idemlin;

namespace {
FiniteFunction fn(const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                  std::vector<int> levels) {
    std::vector<SemiringValue> vs;
    for (int v : levels) vs.push_back(sr.make_int(v));
    return FiniteFunction(X, sr, std::move(vs));
}

SemimodulePtr wedge() {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    return std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b, {fn(X, b, {0, 0, 0}), fn(X, b, {1, 0, 0}), fn(X, b, {0, 1, 0}),
               fn(X, b, {1, 1, 1})}));
}
}  // namespace

TEST_CASE("operator construction validates its table") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    CHECK_THROWS_AS(make_operator(V, V, {}), std::invalid_argument);

    std::vector<FiniteFunction> escaped(V->size(), fn(X, b, {1, 1, 0}));
    CHECK_THROWS_AS(make_operator(V, V, escaped), std::invalid_argument);

    OperatorTable id = identity_table(V);
    CHECK(id.table.size() == V->size());
    CHECK(id.apply(fn(X, b, {1, 1, 1})) == fn(X, b, {1, 1, 1}));
    CHECK_THROWS_AS(id.apply(fn(X, b, {1, 1, 0})), std::invalid_argument);
    CHECK(id == identity_table(V));
}

TEST_CASE("delta functionals evaluate at a point") {
    auto V = wedge();
    // Carrier canonical order: 000, 010, 100, 111.
    OperatorTable d3 = delta_functional(V, 2);
    CHECK(functional_value(d3, 0).is_bottom());
    CHECK(functional_value(d3, 1).is_bottom());
    CHECK(functional_value(d3, 2).is_bottom());
    CHECK(functional_value(d3, 3) == V->semiring().one());

    SUBCASE("evaluation at x1 and x2 is b-linear, at x3 it is not") {
        CHECK(is_b_linear(delta_functional(V, 0)));
        CHECK(is_b_linear(delta_functional(V, 1)));
        CHECK_FALSE(is_b_linear(delta_functional(V, 2)));
    }
}

TEST_CASE("internal sums happen inside the target") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    // The internal join of 100 and 010 is 111, NOT the pointwise sup 110.
    CHECK(internal_sum(*V, {fn(X, b, {1, 0, 0}), fn(X, b, {0, 1, 0})}) ==
          fn(X, b, {1, 1, 1}));
    // Zero summands are dropped.
    CHECK(internal_sum(*V, {fn(X, b, {0, 0, 0}), fn(X, b, {1, 0, 0})}) ==
          fn(X, b, {1, 0, 0}));
    CHECK(internal_sum(*V, {}) == fn(X, b, {0, 0, 0}));
    // A summand outside the carrier escapes.
    CHECK_THROWS_AS(internal_sum(*V, {fn(X, b, {1, 1, 0})}), EscapeError);

    SUBCASE("the empty sum escapes a target without zero") {
        auto m = std::make_shared<const Semimodule>(
            Semimodule::from_carrier(X, b, {fn(X, b, {1, 0, 0})}));
        CHECK_THROWS_AS(internal_sum(*m, {zero_function(X, b)}), EscapeError);
    }
}

TEST_CASE("integral application differs from the pointwise formula off b-subsemimodules") {
    auto W = wedge();
    Semiring b = W->semiring();
    auto X2 = PointSet::make({"s1", "s2"});
    KernelMatrix k = make_kernel(
        X2, W->domain(), b,
        {fn(W->domain(), b, {0, 1, 0}), fn(W->domain(), b, {1, 0, 0})});

    FiniteFunction f = fn(X2, b, {1, 1});
    CHECK(apply_integral(k, f, *W) == fn(W->domain(), b, {1, 1, 1}));
    CHECK(apply_kernel_pointwise(k, f) == fn(W->domain(), b, {1, 1, 0}));

    SUBCASE("they agree on full targets") {
        auto full = std::make_shared<const Semimodule>(
            Semimodule::full(W->domain(), b));
        for (const auto& g : {fn(X2, b, {0, 0}), fn(X2, b, {1, 0}),
                              fn(X2, b, {0, 1}), fn(X2, b, {1, 1})})
            CHECK(apply_integral(k, g, *full) == apply_kernel_pointwise(k, g));
    }
}

TEST_CASE("maximal kernel of the identity on the wedge") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();
    OperatorTable id = identity_table(V);

    KernelMatrix k = max_kernel(id);
    REQUIRE(k.rows.size() == 3);
    CHECK(k.rows[0] == fn(X, b, {1, 0, 0}));
    CHECK(k.rows[1] == fn(X, b, {0, 1, 0}));
    CHECK(k.rows[2] == fn(X, b, {1, 1, 1}));

    // The kernel reproduces the identity...
    for (std::size_t i = 0; i < V->size(); ++i)
        CHECK(apply_integral(k, V->element(i), *V) == V->element(i));

    // ... and dominates every other reproducing kernel pointwise.
    std::size_t valid = 0;
    for (const KernelMatrix& cand : enumerate_kernels(X, *V, 1u << 12)) {
        bool reproduces = true;
        try {
            for (std::size_t i = 0; i < V->size() && reproduces; ++i)
                reproduces = (apply_integral(cand, V->element(i), *V) == V->element(i));
        } catch (const EscapeError&) {
            reproduces = false;
        }
        if (!reproduces) continue;
        ++valid;
        for (std::size_t x = 0; x < 3; ++x) CHECK(function_leq(cand.rows[x], k.rows[x]));
    }
    CHECK(valid >= 1);

    CHECK(has_approximation_property(V));
    CHECK(has_integral_representation(id));
}

TEST_CASE("kernel enumeration is mixed-radix over the target carrier") {
    auto X = PointSet::numbered(2);
    Semiring b = Semiring::boolean();
    auto W = std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b, {fn(X, b, {0, 0}), fn(X, b, {1, 1})}));

    auto ks = enumerate_kernels(PointSet::numbered(2), *W, 1u << 10);
    REQUIRE(ks.size() == 4);
    CHECK(ks[0].rows[0] == W->element(0));
    CHECK(ks[0].rows[1] == W->element(0));
    CHECK(ks[1].rows[0] == W->element(1));  // first point is least significant
    CHECK(ks[1].rows[1] == W->element(0));
    CHECK(ks[2].rows[0] == W->element(0));
    CHECK(ks[2].rows[1] == W->element(1));
    CHECK(ks[3].rows[0] == W->element(1));
    CHECK(ks[3].rows[1] == W->element(1));

    CHECK_THROWS_AS(enumerate_kernels(PointSet::numbered(20), *W, 100), CapExceeded);
}

TEST_CASE("an operator that no kernel reproduces") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();
    auto W = std::make_shared<const Semimodule>(
        Semimodule::from_carrier(X, b, {fn(X, b, {0, 0, 0}), fn(X, b, {1, 0, 0})}));
    // Sending zero to a nonzero element defeats every kernel: the integral
    // of the zero function is always zero.
    std::vector<FiniteFunction> table(V->size(), fn(X, b, {1, 0, 0}));
    OperatorTable A = make_operator(V, W, table);
    CHECK_THROWS_AS(max_kernel(A), NoKernelError);
    CHECK_FALSE(has_integral_representation(A));
    CHECK_FALSE(integral_representation(A).has_value());
}

TEST_CASE("valid kernels without a greatest one still witness integrality") {
    // Minimal frozen instance: V = {zero} on one point, W = {00, 01, 10}
    // (not an upper semilattice), A the zero operator.  Every kernel row
    // reproduces A, but rows 01 and 10 have no least upper bound in W, so
    // there is no maximal kernel; existence is still decidable.
    auto X = PointSet::make({"x1"});
    auto Y = PointSet::make({"y1", "y2"});
    Semiring b = Semiring::boolean();
    auto V = std::make_shared<const Semimodule>(
        Semimodule::from_carrier(X, b, {zero_function(X, b)}));
    auto W = std::make_shared<const Semimodule>(Semimodule::from_carrier(
        Y, b, {fn(Y, b, {0, 0}), fn(Y, b, {0, 1}), fn(Y, b, {1, 0})}));
    REQUIRE_FALSE(W->is_upper_semilattice());

    OperatorTable A = make_operator(V, W, {zero_function(Y, b)});
    CHECK(is_b_linear(A));
    CHECK_THROWS_AS(max_kernel(A), MaxKernelUndefined);
    CHECK(has_integral_representation(A));
    auto k = integral_representation(A);
    REQUIRE(k.has_value());
    // The fallback is the first valid kernel in enumeration order.
    CHECK(k->rows[0] == fn(Y, b, {0, 0}));
    CHECK(apply_integral(*k, zero_function(X, b), *W) == zero_function(Y, b));
}

TEST_CASE("full-space extraction round-trips a defining matrix") {
    auto X = PointSet::numbered(2);
    Semiring m = Semiring::max_plus();
    auto full = std::make_shared<const Semimodule>(Semimodule::full(X, m));

    auto v = [&](std::int64_t n) { return SemiringValue::finite(Rational(n)); };
    KernelMatrix defining = make_kernel(
        X, X, m,
        std::vector<std::vector<SemiringValue>>{{v(0), v(1)},
                                                {SemiringValue::bottom(), v(2)}});
    auto A = [&](const FiniteFunction& f) { return apply_integral(defining, f, *full); };

    KernelMatrix k = max_kernel_full(A, X, m);
    CHECK(k == defining);

    // Spot-check reproduction on a few inputs.
    for (const auto& f :
         {fn(X, m, {3, -1}), fn(X, m, {0, 0}), zero_function(X, m)})
        CHECK(apply_integral(k, f, *full) == A(f));
}

TEST_CASE("maximal kernel on a materialized full space is the impulse diagonal") {
    auto X = PointSet::numbered(2);
    Semiring b = Semiring::boolean();
    auto full = std::make_shared<const Semimodule>(Semimodule::full(X, b));
    KernelMatrix k = max_kernel(identity_table(full));
    CHECK(k.rows[0] == impulse(X, b, 0));
    CHECK(k.rows[1] == impulse(X, b, 1));
}

TEST_CASE("sampled b-linearity on rational full spaces") {
    auto X = PointSet::numbered(3);
    Semiring m = Semiring::max_plus();
    auto full = std::make_shared<const Semimodule>(Semimodule::full(X, m));
    auto v = [&](std::int64_t n) { return SemiringValue::finite(Rational(n)); };
    KernelMatrix k = make_kernel(
        X, X, m,
        std::vector<std::vector<SemiringValue>>{
            {v(0), v(1), SemiringValue::bottom()},
            {v(2), SemiringValue::bottom(), v(0)},
            {SemiringValue::bottom(), v(3), v(1)}});

    std::mt19937_64 rng(99);
    CHECK(is_b_linear_sampled(
        [&](const FiniteFunction& f) { return apply_integral(k, f, *full); }, X, m,
        rng));

    // A constant nonzero map is not linear and is caught by sampling.
    FiniteFunction c = fn(X, m, {1, 1, 1});
    CHECK_FALSE(is_b_linear_sampled([&](const FiniteFunction&) { return c; }, X, m,
                                    rng));
}

TEST_CASE("evaluation at x3 is integral yet not b-linear") {
    auto V = wedge();
    OperatorTable d3 = delta_functional(V, 2);
    CHECK_FALSE(is_b_linear(d3));
    CHECK(has_integral_representation(d3));
    auto k = integral_representation(d3);
    REQUIRE(k.has_value());
    for (std::size_t i = 0; i < V->size(); ++i)
        CHECK(apply_integral(*k, V->element(i), *d3.target) == d3.table[i]);
}

TEST_CASE("the identity is not integral when inf-closure fails") {
    // {000, 010, 101, 110, 111} is admissible and a b-subsemimodule, but not
    // inf-closed (101 ^ 110 = 100 is missing) -- and its identity has no
    // integral representation.
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    auto V = std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b, {fn(X, b, {0, 0, 0}), fn(X, b, {0, 1, 0}), fn(X, b, {1, 0, 1}),
               fn(X, b, {1, 1, 0}), fn(X, b, {1, 1, 1})}));
    CHECK(V->is_b_subsemimodule());
    CHECK(V->is_admissible());
    CHECK_FALSE(V->is_inf_closed());
    CHECK_FALSE(has_approximation_property(V));
    CHECK_FALSE(has_integral_representation(identity_table(V)));
}

TEST_CASE("operator_from_kernel tables the integral action") {
    auto V = wedge();
    auto W = V;
    auto X = V->domain();
    const Semiring& b = V->semiring();
    KernelMatrix k = make_kernel(
        X, X, b,
        {fn(X, b, {1, 0, 0}), fn(X, b, {0, 1, 0}), fn(X, b, {1, 1, 1})});
    OperatorTable A = operator_from_kernel(k, V, W);
    for (std::size_t i = 0; i < V->size(); ++i)
        CHECK(A.table[i] == apply_integral(k, V->element(i), *W));
}
