#pragma once

// JSON serialization for semirings, values, semimodules, operators, kernels,
// and the application input types, plus file helpers.  Output is strict and
// canonical (object keys sorted by the JSON library); input is validated and
// every failure raises ParseError with a JSON-path-style location.

#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "idemlin/apps.hpp"
#include "idemlin/operators.hpp"

namespace idemlin {

// Malformed input document; the CLI maps this to its input-error exit code.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Values: {"t":"bot"} | {"t":"top"} | {"t":"q","num":int,"den":int}.
// Input also accepts an integer shorthand n (meaning n/1) and the strings
// "bot" / "top"; everything is canonicalized through the semiring.
nlohmann::json value_to_json(const SemiringValue& v);
SemiringValue value_from_json(const nlohmann::json& j, const Semiring& sr,
                              const std::string& where = "$");

// Semirings: {"instance": "boolean"|"max-plus"|"min-plus"|"fuzzy-chain"|
// "saturated-nat", "n": int (chain instances), "completed": bool (max/min)}.
nlohmann::json semiring_to_json(const Semiring& sr);
Semiring semiring_from_json(const nlohmann::json& j, const std::string& where = "$");

// Semimodules: {"semiring": spec, "points": [labels], ...} with exactly one
// of "carrier": [[value,...],...], "generators": [[value,...],...] (options
// "inf_close": bool, "cap": int), or "full": true.
nlohmann::json semimodule_to_json(const Semimodule& m);
SemimodulePtr semimodule_from_json(const nlohmann::json& j,
                                   const std::string& where = "$");

// Operators: {"source": semimodule, "target": semimodule, ...} with either
// "table": [[source-carrier-index, [value,...]],...] (every index exactly
// once) or "kernel": [[value,...],...] (one row per source point, dense over
// the target points).
struct OperatorDoc {
    SemimodulePtr source;
    SemimodulePtr target;
    // Tabled form; absent only for kernel-form operators whose source space
    // cannot be materialized (e.g. full spaces over the rational instances).
    std::optional<OperatorTable> table;
    // Present iff the document used the kernel form.
    std::optional<KernelMatrix> kernel;
};
OperatorDoc operator_doc_from_json(const nlohmann::json& j,
                                   const std::string& where = "$");
// The tabled operator, or ParseError when only an untabled kernel form is
// possible.
OperatorTable operator_from_json(const nlohmann::json& j,
                                 const std::string& where = "$");
nlohmann::json operator_to_json(const OperatorTable& A);

// Kernels serialize as a dense X x Y matrix in row-major order:
// {"semiring": spec, "source_points": [...], "target_points": [...],
//  "matrix": [[value,...],...]}.
nlohmann::json kernel_to_json(const KernelMatrix& k);
KernelMatrix kernel_from_json(const nlohmann::json& j, const std::string& where = "$");

// Graphs: {"nodes":[...], "edges":[[u,v,num,den],...], "source": label}.
// Endpoints and source may be labels or 0-based indices; den may be omitted.
WeightedGraph graph_from_json(const nlohmann::json& j, const std::string& where = "$");
nlohmann::json graph_to_json(const WeightedGraph& g);

// HMMs: {"states":[...], "initial":[v,...], "transition":[[v,...],...],
//  "emission":[[v,...],...], "observations":[int,...]} over max-plus values.
HmmSpec hmm_from_json(const nlohmann::json& j, const std::string& where = "$");
nlohmann::json hmm_to_json(const HmmSpec& h);

// Reads and parses a JSON document; ParseError carries file and byte offset.
nlohmann::json load_json_file(const std::string& path);

// Canonical pretty serialization (sorted keys, two-space indent, newline).
std::string stable_dump(const nlohmann::json& j);

} // namespace idemlin
