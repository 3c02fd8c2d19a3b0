#pragma once

// Executable verification harness: generates random and exhaustive families
// of semimodules and b-linear operators, evaluates each representation
// statement as a concrete equivalence, and searches for counterexamples
// when a hypothesis is deliberately dropped.
//
// Determinism contract: a given TrialConfig produces a byte-identical
// JSON-lines report (wall time is kept out of the serialization).  Every
// emitted witness embeds the concrete instance, so it can be replayed
// without re-running the generators.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "idemlin/nuclear.hpp"

namespace idemlin {

enum class CheckId {
    Prop1,
    Prop2,
    Thm1,
    Thm2,
    Prop3,
    Corollary,
    Thm3,
    Thm3a,
    Prop4,
    Thm4,
    Prop5,
};

// All checks in their canonical run order.
const std::vector<CheckId>& all_checks();
std::string check_name(CheckId id);
std::optional<CheckId> check_from_name(const std::string& name);

struct TrialConfig {
    std::vector<Semiring> semirings{Semiring::boolean()};
    std::vector<CheckId> checks;  // empty = all
    std::size_t min_points = 1;
    std::size_t max_points = 2;
    std::size_t carrier_cap = 8;    // generated / enumerated V carrier bound
    std::size_t w_carrier_cap = 8;  // enumerated-W universe carrier bound
    std::size_t instances = 16;     // sampled instances per (check, semiring)
    std::size_t operators_per_instance = 4;
    bool exhaustive = false;  // enumerate all carriers instead of sampling
    std::uint64_t seed = 1;
    std::uint64_t subset_budget = 2'000'000;  // exhaustive subsets visited per (check, semiring)
    std::uint64_t enumeration_cap = 1u << 20;
    std::size_t max_lines = 10000;  // per-check instance lines kept in the report

    void validate() const;  // throws std::invalid_argument
};

nlohmann::json trial_config_to_json(const TrialConfig& cfg);
// Throws ParseError on malformed documents.
TrialConfig trial_config_from_json(const nlohmann::json& j);

struct Violation {
    std::string detail;
    nlohmann::json witness;  // {"kind":"violation","check":...,"instance":{...}}
};

struct CheckReport {
    CheckId check = CheckId::Prop1;
    std::uint64_t instances = 0;  // instances evaluated (pass + fail)
    std::uint64_t skipped = 0;    // cap-skips and filtered instances
    std::vector<Violation> violations;
    std::vector<nlohmann::json> lines;  // one object per instance, capped
    std::uint64_t suppressed_lines = 0;
    double wall_ms = 0.0;  // measured, never serialized

    bool ok() const { return violations.empty(); }
    nlohmann::json summary_json() const;
};

CheckReport run_check(CheckId id, const TrialConfig& cfg);
std::vector<CheckReport> run_checks(const TrialConfig& cfg);

// JSON lines: every instance line of every check, each check's summary, and
// a final suite summary.  Byte-identical across runs with equal configs.
std::string report_to_json_lines(const std::vector<CheckReport>& reports,
                                 const TrialConfig& cfg);

// Re-evaluates one serialized witness (either kind); returns the violation
// if the failure reproduces, nullopt when the instance now passes.
std::optional<Violation> replay_witness(const nlohmann::json& witness,
                                        const TrialConfig& cfg);

// Deterministic semimodule generator: random generators closed via
// close_under (so the result is a b-subsemimodule, inf-closed on request).
// Throws CapExceeded when the closure exceeds the carrier cap.
Semimodule gen_semimodule(const Semiring& sr, std::shared_ptr<const PointSet> domain,
                          std::uint64_t seed, std::size_t carrier_cap,
                          bool inf_close = false);
// Convenience form drawing the semiring and |X| from the config stream.
Semimodule gen_semimodule(const TrialConfig& cfg, std::uint64_t seed);

// Deterministic b-linear operator generator: a random kernel when the
// source is a b-subsemimodule, otherwise a validated random join-preserving
// extension from the join-irreducibles, falling back to a rank-1 map and
// finally to the zero operator.  The result is always b-linear.
OperatorTable gen_b_linear_operator(const SemimodulePtr& V, const SemimodulePtr& W,
                                    std::uint64_t seed, int budget = 32);

struct SearchResult {
    bool found = false;
    nlohmann::json witness;  // {"kind":"counterexample",...} when found
    std::string detail;
    std::uint64_t examined = 0;  // candidate carriers inspected
};

// Searches ascending (carrier size, |X|, enumeration order) for the
// smallest instance where the statement's conclusion fails once the named
// hypothesis is dropped.  Supported pairs: prop2/"b-subsemimodule",
// thm1/"inf-closure", thm1/"admissibility", thm2/"functional-integrality".
SearchResult counterexample_search(CheckId statement, const std::string& dropped_hypothesis,
                                   const TrialConfig& cfg);

}  // namespace idemlin
