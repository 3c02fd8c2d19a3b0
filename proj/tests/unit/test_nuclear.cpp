#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "idemlin/nuclear.hpp"

using namespace idemlin;

namespace {
FiniteFunction fn(const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                  std::vector<int> levels) {
    std::vector<SemiringValue> vs;
    for (int v : levels) vs.push_back(sr.make_int(v));
    return FiniteFunction(X, sr, std::move(vs));
}

// Carrier {000, 010, 100, 111}: joins of the two atoms land on the top.
SemimodulePtr wedge() {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    return std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b, {fn(X, b, {0, 0, 0}), fn(X, b, {1, 0, 0}), fn(X, b, {0, 1, 0}),
               fn(X, b, {1, 1, 1})}));
}

// Carrier {000, 010, 101, 110, 111}: a b-subsemimodule (all internal joins
// are pointwise) on which the identity has no kernel.
SemimodulePtr gap() {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    return std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b,
        {fn(X, b, {0, 0, 0}), fn(X, b, {0, 1, 0}), fn(X, b, {1, 0, 1}),
         fn(X, b, {1, 1, 0}), fn(X, b, {1, 1, 1})}));
}

// Values of a functional (an operator into the scalar space) as one tuple
// per carrier element, for order-pinned comparisons.
std::vector<SemiringValue> values_of(const OperatorTable& phi) {
    std::vector<SemiringValue> out;
    out.reserve(phi.table.size());
    for (std::size_t i = 0; i < phi.table.size(); ++i)
        out.push_back(functional_value(phi, i));
    return out;
}

std::vector<SemiringValue> tuple(const Semiring& sr, std::vector<int> levels) {
    std::vector<SemiringValue> out;
    out.reserve(levels.size());
    for (int v : levels) out.push_back(sr.make_int(v));
    return out;
}

bool contains_tuple(const std::vector<OperatorTable>& fs,
                    const std::vector<SemiringValue>& t) {
    for (const auto& f : fs)
        if (values_of(f) == t) return true;
    return false;
}
}  // namespace

TEST_CASE("b-linear functionals are the valid irreducible assignments") {
    auto V = wedge();
    const Semiring& b = V->semiring();

    // Two join-irreducibles (010 and 100), two scalars: four candidates,
    // all of which validate.  Ascending assignment order, low digit first.
    auto fs = enumerate_b_linear_functionals(V);
    REQUIRE(fs.size() == 4);
    CHECK(values_of(fs[0]) == tuple(b, {0, 0, 0, 0}));
    CHECK(values_of(fs[1]) == tuple(b, {0, 1, 0, 1}));
    CHECK(values_of(fs[2]) == tuple(b, {0, 0, 1, 1}));
    CHECK(values_of(fs[3]) == tuple(b, {0, 1, 1, 1}));
    for (const auto& f : fs) CHECK(is_b_linear(f));

    // Evaluation at x3 (values 0,0,0,1) is not b-linear and must be absent.
    CHECK_FALSE(contains_tuple(fs, tuple(b, {0, 0, 0, 1})));

    SUBCASE("the candidate cap counts assignments") {
        CHECK_THROWS_AS(enumerate_b_linear_functionals(V, 3), CapExceeded);
        CHECK(enumerate_b_linear_functionals(V, 4).size() == 4);
    }
}

TEST_CASE("functional enumeration respects join constraints off the wedge") {
    auto V = gap();
    const Semiring& b = V->semiring();

    // Irreducibles are 010, 101, 110.  Monotonicity pins phi(010) below
    // phi(110), and 010 v 101 = 111 pins phi(110) below the join of the
    // other two; five of the eight assignments survive: zero, the three
    // point evaluations, and their top.
    auto fs = enumerate_b_linear_functionals(V);
    CHECK(fs.size() == 5);
    CHECK_FALSE(contains_tuple(fs, tuple(b, {0, 0, 0, 1, 1})));

    // Every point evaluation is b-linear here and must be enumerated.
    CHECK(contains_tuple(fs, tuple(b, {0, 0, 1, 1, 1})));  // at x1
    CHECK(contains_tuple(fs, tuple(b, {0, 1, 0, 1, 1})));  // at x2
    CHECK(contains_tuple(fs, tuple(b, {0, 0, 1, 0, 1})));  // at x3
}

TEST_CASE("every wedge functional is a delta-functional with maximal witness") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    DeltaSet ds = delta_set(V);
    REQUIRE(ds.members.size() == 4);
    CHECK(ds.excluded.empty());

    // The witness reported is the largest one (the internal join of all
    // witnesses whenever that join is itself a witness).
    CHECK(ds.members[0].witness == fn(X, b, {1, 1, 1}));  // zero functional
    CHECK(ds.members[1].witness == fn(X, b, {0, 1, 0}));
    CHECK(ds.members[2].witness == fn(X, b, {1, 0, 0}));
    CHECK(ds.members[3].witness == fn(X, b, {0, 0, 0}));

    // The defining inequality phi(w) (.) witness <= w, for every w.
    for (const auto& d : ds.members)
        for (std::size_t w = 0; w < V->size(); ++w)
            CHECK(function_leq(scalar_times(functional_value(d.phi, w), d.witness),
                               V->element(w)));

    // Nothing above 010 witnesses the second functional: scaling the top by
    // phi(010) = one lands on 111, which is not below 010.
    CHECK_FALSE(function_leq(
        scalar_times(functional_value(ds.members[1].phi, 1), fn(X, b, {1, 1, 1})),
        V->element(1)));
}

TEST_CASE("the delta map embeds the wedge") {
    auto V = wedge();
    const Semiring& b = V->semiring();

    IDeltaReport rep = i_delta(V);
    REQUIRE(rep.deltas.size() == 4);
    REQUIRE(rep.delta_points->size() == 4);
    CHECK(rep.delta_points->labels[0] == "phi0");
    CHECK(rep.delta_points->labels[3] == "phi3");

    // (i(v))(phi_j) = phi_j(v), in the pinned functional order.
    auto row = [&](std::size_t i) { return rep.map.table[i]; };
    CHECK(row(0) == fn(rep.delta_points, b, {0, 0, 0, 0}));
    CHECK(row(1) == fn(rep.delta_points, b, {0, 1, 0, 1}));
    CHECK(row(2) == fn(rep.delta_points, b, {0, 0, 1, 1}));
    CHECK(row(3) == fn(rep.delta_points, b, {0, 1, 1, 1}));

    CHECK(rep.image->size() == 4);
    CHECK(rep.injective);
    CHECK(rep.join_preserving);
    CHECK(rep.order_reflecting);
    CHECK(rep.embedding);
}

TEST_CASE("the delta map embeds a b-subsemimodule") {
    auto V = gap();
    IDeltaReport rep = i_delta(V);
    CHECK(rep.deltas.size() == 5);
    CHECK(rep.image->size() == 5);
    CHECK(rep.injective);
    CHECK(rep.join_preserving);
    CHECK(rep.order_reflecting);
    CHECK(rep.embedding);
}

TEST_CASE("identity nuclearity coincides with the approximation property") {
    SUBCASE("wedge: identity is a sum of rank-1 maps") {
        auto V = wedge();
        NuclearityVerdict verdict = decide_id_b_nuclear(V);
        CHECK(verdict.b_nuclear);
        REQUIRE_FALSE(verdict.witness.parts.empty());
        CHECK(sum_rank_ones(verdict.witness, V, V) == identity_table(V));
        CHECK(has_approximation_property(V));
        for (const auto& part : verdict.witness.parts) CHECK(is_b_linear(part.phi));
    }

    SUBCASE("gap module: identity is not, matching the missing kernel") {
        auto V = gap();
        NuclearityVerdict verdict = decide_id_b_nuclear(V);
        CHECK_FALSE(verdict.b_nuclear);
        CHECK(verdict.witness.parts.empty());
        CHECK_FALSE(has_approximation_property(V));
    }
}

TEST_CASE("integral operators need not be sums of rank-1 maps") {
    auto V = wedge();
    // Evaluation at x3 has a kernel (the scalar impulse at x3) but no
    // b-linear functional can vanish on both atoms yet hit the top, so no
    // rank-1 family reaches it.
    OperatorTable d3 = delta_functional(V, 2);
    CHECK(has_integral_representation(d3));
    NuclearityVerdict verdict = decide_b_nuclear(d3);
    CHECK_FALSE(verdict.b_nuclear);
    CHECK(verdict.witness.parts.empty());
}

TEST_CASE("a rank-one operator decomposes and the family stays below it") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    // A = phi (x) 111 with phi the largest functional: zero off zero.
    std::vector<FiniteFunction> table = {
        fn(X, b, {0, 0, 0}), fn(X, b, {1, 1, 1}), fn(X, b, {1, 1, 1}),
        fn(X, b, {1, 1, 1})};
    OperatorTable A = make_operator(V, V, table);

    NuclearityVerdict verdict = decide_b_nuclear(A);
    CHECK(verdict.b_nuclear);
    REQUIRE_FALSE(verdict.witness.parts.empty());
    CHECK(sum_rank_ones(verdict.witness, V, V) == A);
    for (const auto& part : verdict.witness.parts) {
        CHECK(is_b_linear(part.phi));
        for (std::size_t i = 0; i < V->size(); ++i)
            CHECK(function_leq(
                scalar_times(functional_value(part.phi, i), part.w), A.table[i]));
    }
}

TEST_CASE("rank-one application scales the column by the functional value") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    auto fs = enumerate_b_linear_functionals(V);
    RankOneMap r{fs[1], fn(X, b, {1, 1, 1})};  // phi(010) = one
    CHECK(rank_one_apply(r, V->element(1)) == fn(X, b, {1, 1, 1}));
    CHECK(rank_one_apply(r, V->element(0)) == fn(X, b, {0, 0, 0}));
    CHECK(rank_one_apply(r, V->element(2)) == fn(X, b, {0, 0, 0}));
}

TEST_CASE("summing rank-one maps uses the target's internal sup") {
    auto V = wedge();
    auto X = V->domain();
    const Semiring& b = V->semiring();

    SUBCASE("the empty decomposition is the zero operator") {
        OperatorTable z = sum_rank_ones(NuclearDecomposition{}, V, V);
        for (const auto& img : z.table) CHECK(img == fn(X, b, {0, 0, 0}));
    }

    SUBCASE("a target without zero rejects the empty sum") {
        auto W = std::make_shared<const Semimodule>(
            Semimodule::from_carrier(X, b, {fn(X, b, {1, 0, 0})}));
        CHECK_THROWS_AS(sum_rank_ones(NuclearDecomposition{}, V, W), EscapeError);
    }

    SUBCASE("atom columns join internally, landing on the top") {
        auto fs = enumerate_b_linear_functionals(V);
        NuclearDecomposition d;
        d.parts.push_back(RankOneMap{fs[1], fn(X, b, {0, 1, 0})});
        d.parts.push_back(RankOneMap{fs[2], fn(X, b, {1, 0, 0})});
        OperatorTable s = sum_rank_ones(d, V, V);
        CHECK(s.table[0] == fn(X, b, {0, 0, 0}));
        CHECK(s.table[1] == fn(X, b, {0, 1, 0}));
        CHECK(s.table[2] == fn(X, b, {1, 0, 0}));
        // At the top both parts fire; 010 and 100 join to 111 inside V.
        CHECK(s.table[3] == fn(X, b, {1, 1, 1}));
    }
}

TEST_CASE("the canonical kernel decomposition reproduces the operator") {
    auto X = PointSet::numbered(3);
    Semiring b = Semiring::boolean();
    auto V = std::make_shared<const Semimodule>(Semimodule::close_under(
        X, b, {fn(X, b, {1, 1, 0}), fn(X, b, {0, 1, 1})}));
    REQUIRE(V->is_b_subsemimodule());
    REQUIRE(V->size() == 4);

    OperatorTable id = identity_table(V);
    NuclearDecomposition d = nuclear_decomposition_from_kernel(id);
    REQUIRE(d.parts.size() == 3);  // one point evaluation per domain point
    CHECK(sum_rank_ones(d, V, V) == id);
    for (std::size_t x = 0; x < 3; ++x) {
        CHECK(is_b_linear(d.parts[x].phi));
        CHECK(values_of(d.parts[x].phi) == values_of(delta_functional(V, x)));
    }

    SUBCASE("sources whose joins are not pointwise are rejected") {
        CHECK_THROWS_AS(nuclear_decomposition_from_kernel(identity_table(wedge())),
                        std::domain_error);
    }

    SUBCASE("operators without a kernel are rejected") {
        auto W = std::make_shared<const Semimodule>(Semimodule::from_carrier(
            X, b, {fn(X, b, {0, 0, 0}), fn(X, b, {1, 0, 0})}));
        // Sending zero to 100 cannot be integral.
        std::vector<FiniteFunction> all_hit(V->size(), fn(X, b, {1, 0, 0}));
        OperatorTable A = make_operator(V, W, all_hit);
        CHECK_THROWS_AS(nuclear_decomposition_from_kernel(A), std::domain_error);
    }
}
