#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "idemlin/harness.hpp"
#include "idemlin/io.hpp"

using namespace idemlin;
using nlohmann::json;

TEST_CASE("check names round-trip and keep their canonical order") {
    const auto& ids = all_checks();
    REQUIRE(ids.size() == 11);
    CHECK(check_name(ids.front()) == "prop1");
    CHECK(check_name(ids.back()) == "prop5");
    for (CheckId id : ids) {
        auto back = check_from_name(check_name(id));
        REQUIRE(back.has_value());
        CHECK(*back == id);
    }
    CHECK_FALSE(check_from_name("prop99").has_value());
}

TEST_CASE("trial configs validate and round-trip through json") {
    TrialConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    cfg.semirings = {Semiring::boolean(), Semiring::fuzzy_chain(2)};
    cfg.checks = {CheckId::Prop1, CheckId::Thm2};
    cfg.max_points = 3;
    cfg.instances = 5;
    cfg.seed = 99;
    json j = trial_config_to_json(cfg);
    TrialConfig back = trial_config_from_json(j);
    CHECK(trial_config_to_json(back) == j);

    SUBCASE("invalid settings are rejected") {
        TrialConfig bad;
        bad.semirings.clear();
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = TrialConfig{};
        bad.min_points = 0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = TrialConfig{};
        bad.min_points = 3;
        bad.max_points = 2;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = TrialConfig{};
        bad.carrier_cap = 0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        bad = TrialConfig{};
        bad.subset_budget = 0;
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    }

    SUBCASE("malformed documents raise parse errors") {
        CHECK_THROWS_AS(trial_config_from_json(json({{"checks", {"nope"}}})),
                        ParseError);
        CHECK_THROWS_AS(trial_config_from_json(json({{"semirings", "x"}})),
                        ParseError);
    }
}

TEST_CASE("a small exhaustive run passes every check") {
    TrialConfig cfg;
    cfg.semirings = {Semiring::boolean()};
    cfg.exhaustive = true;
    cfg.min_points = 1;
    cfg.max_points = 2;
    cfg.carrier_cap = 3;
    cfg.w_carrier_cap = 3;

    std::vector<CheckReport> reports = run_checks(cfg);
    REQUIRE(reports.size() == all_checks().size());
    std::uint64_t total_instances = 0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CHECK(reports[i].check == all_checks()[i]);
        CHECK(reports[i].ok());
        total_instances += reports[i].instances;
    }
    CHECK(total_instances > 0);
}

TEST_CASE("reports are byte-identical across runs and carry no wall time") {
    TrialConfig cfg;
    cfg.semirings = {Semiring::boolean()};
    cfg.min_points = 1;
    cfg.max_points = 2;
    cfg.carrier_cap = 6;
    cfg.instances = 4;
    cfg.operators_per_instance = 2;
    cfg.seed = 7;

    const std::string first = report_to_json_lines(run_checks(cfg), cfg);
    const std::string second = report_to_json_lines(run_checks(cfg), cfg);
    CHECK(first == second);
    CHECK(first.find("wall") == std::string::npos);

    // The last line is the suite summary.
    const auto tail_pos = first.rfind('\n', first.size() - 2);
    const json tail = json::parse(first.substr(tail_pos + 1));
    CHECK(tail.contains("config"));
    CHECK(tail.contains("checks_run"));
    CHECK(tail["total_violations"] == 0);
}

TEST_CASE("line caps and subset budgets surface in the report") {
    SUBCASE("max_lines suppresses instance lines, not instances") {
        TrialConfig cfg;
        cfg.semirings = {Semiring::boolean()};
        cfg.checks = {CheckId::Prop1};
        cfg.instances = 5;
        cfg.max_lines = 2;
        CheckReport rep = run_check(CheckId::Prop1, cfg);
        CHECK(rep.instances >= 5);
        CHECK(rep.lines.size() <= 2);
        CHECK(rep.suppressed_lines > 0);
    }

    SUBCASE("an exhausted subset budget records skips") {
        TrialConfig cfg;
        cfg.semirings = {Semiring::boolean()};
        cfg.checks = {CheckId::Prop1};
        cfg.exhaustive = true;
        cfg.max_points = 2;
        cfg.subset_budget = 3;
        CheckReport rep = run_check(CheckId::Prop1, cfg);
        CHECK(rep.skipped > 0);
        CHECK(rep.ok());
    }
}

TEST_CASE("dropping b-subsemimodule from the functional statement finds the wedge") {
    TrialConfig cfg;
    cfg.semirings = {Semiring::boolean()};
    cfg.min_points = 3;
    cfg.max_points = 3;
    cfg.carrier_cap = 8;

    SearchResult r = counterexample_search(CheckId::Prop2, "b-subsemimodule", cfg);
    REQUIRE(r.found);
    CHECK(r.examined == 34);
    CHECK(r.witness["kind"] == "counterexample");
    CHECK(r.witness["statement"] == "prop2");
    CHECK(r.witness["dropped"] == "b-subsemimodule");
    CHECK(r.witness["instance"]["V"]["carrier"].size() == 4);
    CHECK(r.detail.find("not a b-subsemimodule") != std::string::npos);
    CHECK(r.detail.find("(0,0,1)") != std::string::npos);

    // The witness replays to a live violation.
    CHECK(replay_witness(r.witness, cfg).has_value());

    SUBCASE("a tampered witness no longer reproduces") {
        json fixed = r.witness;
        // Swap in a carrier whose joins are pointwise; the premise gap closes.
        fixed["instance"]["V"]["carrier"] = {
            {0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {0, 1, 1}};
        CHECK_FALSE(replay_witness(fixed, cfg).has_value());
    }

    SUBCASE("widening the point range reaches the same witness later") {
        cfg.min_points = 1;
        SearchResult wide = counterexample_search(CheckId::Prop2, "b-subsemimodule", cfg);
        REQUIRE(wide.found);
        CHECK(wide.examined == 44);
        CHECK(wide.witness["instance"] == r.witness["instance"]);
    }
}

TEST_CASE("dropping admissibility strands a functional without a kernel") {
    TrialConfig cfg;
    cfg.semirings = {Semiring::fuzzy_chain(2)};
    cfg.min_points = 2;
    cfg.max_points = 2;
    cfg.carrier_cap = 8;

    SearchResult r = counterexample_search(CheckId::Thm1, "admissibility", cfg);
    REQUIRE(r.found);
    CHECK(r.examined == 49);
    CHECK(r.witness["statement"] == "thm1");
    CHECK(r.witness["dropped"] == "admissibility");
    CHECK(r.detail.find("not admissible") != std::string::npos);
    CHECK(r.witness["instance"]["V"]["carrier"].size() == 4);
    CHECK(replay_witness(r.witness, cfg).has_value());
}

TEST_CASE("dropping functional-integrality splits nuclear from integral") {
    TrialConfig cfg;
    cfg.semirings = {Semiring::fuzzy_chain(2)};
    cfg.min_points = 2;
    cfg.max_points = 2;
    cfg.carrier_cap = 8;

    SearchResult r =
        counterexample_search(CheckId::Thm2, "functional-integrality", cfg);
    REQUIRE(r.found);
    CHECK(r.examined == 49);
    CHECK(r.witness["statement"] == "thm2");
    CHECK(r.detail.find("b-nuclear=1") != std::string::npos);
    CHECK(r.detail.find("integral=0") != std::string::npos);
    CHECK(replay_witness(r.witness, cfg).has_value());
}

TEST_CASE("the inf-closure search sweeps its range without a counterexample") {
    // For operators into the scalars the enumerated range holds no falsifier:
    // the sweep completes (budget untouched) and reports found = false.
    TrialConfig cfg;
    cfg.semirings = {Semiring::boolean(), Semiring::fuzzy_chain(2)};
    cfg.min_points = 1;
    cfg.max_points = 3;
    cfg.carrier_cap = 8;

    SearchResult r = counterexample_search(CheckId::Thm1, "inf-closure", cfg);
    CHECK_FALSE(r.found);
    CHECK(r.examined == 972109);
}

TEST_CASE("unsupported search pairs and witnesses are rejected") {
    TrialConfig cfg;
    CHECK_THROWS_AS(counterexample_search(CheckId::Prop1, "anything", cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(counterexample_search(CheckId::Thm2, "b-subsemimodule", cfg),
                    std::invalid_argument);
    CHECK_THROWS_AS(replay_witness(json({{"kind", "weird"}}), cfg), ParseError);
    CHECK_THROWS_AS(replay_witness(json(42), cfg), ParseError);
}

TEST_CASE("generated semimodules are closed and respect their caps") {
    auto X = PointSet::numbered(2);
    const Semiring f2 = Semiring::fuzzy_chain(2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Semimodule m = gen_semimodule(f2, X, seed, 64);
        CHECK(m.is_b_subsemimodule());
        CHECK(m.contains_zero());
        CHECK(m.size() <= 64);

        Semimodule mi = gen_semimodule(f2, X, seed, 64, /*inf_close=*/true);
        CHECK(mi.is_inf_closed());
        CHECK(mi.is_b_subsemimodule());
    }

    // Determinism: one seed, one carrier.
    CHECK(semimodule_to_json(gen_semimodule(f2, X, 5, 64)) ==
          semimodule_to_json(gen_semimodule(f2, X, 5, 64)));

    CHECK_THROWS_AS(gen_semimodule(Semiring::max_plus(), X, 1, 64),
                    std::invalid_argument);
}

TEST_CASE("generated operators are always b-linear") {
    auto X = PointSet::numbered(2);
    const Semiring b = Semiring::boolean();
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto V = std::make_shared<const Semimodule>(gen_semimodule(b, X, seed, 16));
        auto W = std::make_shared<const Semimodule>(
            gen_semimodule(b, X, seed + 1000, 16));
        OperatorTable A = gen_b_linear_operator(V, W, seed);
        CHECK(A.source == V);
        CHECK(A.target == W);
        CHECK(is_b_linear(A));
    }
}
