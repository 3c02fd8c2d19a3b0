#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idemlin/operators.hpp"

namespace idemlin {

// One-dimensional map v |-> phi(v) (.) w, with phi a b-linear functional.
struct RankOneMap {
    OperatorTable phi;
    FiniteFunction w;
};

// A finite family of rank-1 maps, summed with the target's internal sup.
struct NuclearDecomposition {
    std::vector<RankOneMap> parts;
};

// A delta-functional: a b-linear functional with a witness v such that
// phi(w) (.) v lies below w for every carrier element w.
struct DeltaFunctional {
    OperatorTable phi;
    FiniteFunction witness; // a maximal witness
};

FiniteFunction rank_one_apply(const RankOneMap& r, const FiniteFunction& v);

// v |-> internal-sup_i phi_i(v) (.) w_i, tabled over V; the empty
// decomposition is the zero operator.  Throws EscapeError when a sum
// leaves the target carrier.
OperatorTable sum_rank_ones(const NuclearDecomposition& d, const SemimodulePtr& V,
                            const SemimodulePtr& W);

// The canonical decomposition A v = sup_x delta_x(v) (.) k_max(x).
// Requires V to be a b-subsemimodule (so each delta_x is b-linear) and A to
// have an integral representation; throws std::domain_error otherwise.
NuclearDecomposition nuclear_decomposition_from_kernel(const OperatorTable& A,
                                                       std::uint64_t enumeration_cap = 1u
                                                                                       << 20);

// All b-linear functionals on V (maps into scalar_space).  A candidate is
// determined by its values on the join-irreducible carrier elements, so the
// search space is |K|^|irreducibles|, capped by `candidate_cap`; every
// candidate is validated in full.  Deterministic ascending order.
std::vector<OperatorTable> enumerate_b_linear_functionals(
    const SemimodulePtr& V, std::uint64_t candidate_cap = 1u << 20);

struct DeltaSet {
    std::vector<DeltaFunctional> members;
    struct Excluded {
        OperatorTable phi;
        FiniteFunction failing_w; // no witness works; this w defeats the last candidate
    };
    std::vector<Excluded> excluded;
};

// Delta-functionals of V among the enumerated b-linear functionals, each
// with one maximal witness (the internal join of all witnesses when that is
// itself a witness, else a pointwise-maximal one).
DeltaSet delta_set(const SemimodulePtr& V, std::uint64_t candidate_cap = 1u << 20);

struct IDeltaReport {
    std::shared_ptr<const PointSet> delta_points; // one label per delta-functional
    std::vector<DeltaFunctional> deltas;          // in point order
    OperatorTable map;                            // i_Delta : V -> K(Delta(V))
    SemimodulePtr image;                          // i_Delta(V) as a semimodule
    bool injective = false;
    bool join_preserving = false; // V joins map to image-internal joins
    bool order_reflecting = false;
    bool embedding = false; // all three above
};

// The natural map (i_Delta(v))(phi) = phi(v) and its image semimodule.
IDeltaReport i_delta(const SemimodulePtr& V, std::uint64_t candidate_cap = 1u << 20);

struct NuclearityVerdict {
    bool b_nuclear = false;
    NuclearDecomposition witness; // sums to the operator when b_nuclear
};

// Whether id: V -> V is a sum of rank-1 maps.  Decided by summing the
// dominant family {(phi, m) : phi a delta-functional, m a maximal witness}:
// that sum reproduces id exactly when any decomposition does.
NuclearityVerdict decide_id_b_nuclear(const SemimodulePtr& V,
                                      std::uint64_t candidate_cap = 1u << 20);

// Whether A: V -> W is a sum of rank-1 maps, by the same dominant-family
// argument with L_phi = {w : phi(v) (.) w lies below Av for all v}.
NuclearityVerdict decide_b_nuclear(const OperatorTable& A,
                                   std::uint64_t candidate_cap = 1u << 20);

} // namespace idemlin
