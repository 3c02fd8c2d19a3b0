#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "idemlin/function.hpp"
#include "idemlin/semiring.hpp"

namespace idemlin {

// A functional semimodule: either the full function space K(X), or an
// explicitly enumerated carrier of functions over an enumerable semiring.
//
// Construction never rejects a carrier for failing the structural predicates
// (upper semilattice, scalar closure, ...): those are cached as flags so that
// callers can classify arbitrary carriers.  Operations that only make sense
// on well-formed instances (internal_join on a non-semilattice) throw.
class Semimodule {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // Explicit carrier; sorted and deduplicated canonically.  Requires an
    // enumerable semiring (scalar closure is not decidable otherwise).
    static Semimodule from_carrier(std::shared_ptr<const PointSet> domain,
                                   const Semiring& sr,
                                   std::vector<FiniteFunction> carrier);

    // The full space K(X).  Materializes the carrier when the semiring is
    // enumerable and |K|^|X| fits under `materialize_cap`; otherwise the
    // space stays abstract (all predicates hold, no carrier list).
    static Semimodule full(std::shared_ptr<const PointSet> domain, const Semiring& sr,
                           std::uint64_t materialize_cap = 4096);

    // Smallest superset of `generators` containing the empty sup (zero) and
    // closed under every scalar action and pairwise pointwise sups; with
    // `inf_close` also closed under pairwise pointwise infs.  The result is
    // always a b-subsemimodule of K(X).  Throws CapExceeded when the fixed
    // point grows past `cap`; requires an enumerable semiring.
    static Semimodule close_under(std::shared_ptr<const PointSet> domain,
                                  const Semiring& sr,
                                  const std::vector<FiniteFunction>& generators,
                                  bool inf_close = false, std::uint64_t cap = 100000);

    const std::shared_ptr<const PointSet>& domain() const { return domain_; }
    const Semiring& semiring() const { return sr_; }
    bool is_full() const { return full_; }
    bool materialized() const { return materialized_; }

    // Enumerated carrier in canonical order; throws for abstract full spaces.
    const std::vector<FiniteFunction>& carrier() const;
    std::size_t size() const;
    const FiniteFunction& element(std::size_t i) const { return carrier().at(i); }

    bool contains(const FiniteFunction& f) const;
    // Index of f in the canonical carrier order, or npos.
    std::size_t index_of(const FiniteFunction& f) const;

    // Cached structural predicates (always true for full spaces).
    bool contains_zero() const { return contains_zero_; }
    bool is_scalar_closed() const { return scalar_closed_; }
    bool is_upper_semilattice() const { return usl_; }
    bool is_b_subsemimodule() const { return b_sub_; }
    bool is_inf_closed() const { return inf_closed_; }
    bool is_nondegenerate() const { return nondegenerate_; }
    bool is_admissible() const { return admissible_; }
    // Scalar action distributes over the internal join:
    // lambda (.) (f v g) == (lambda f) v (lambda g) for all scalars and pairs.
    bool is_scalar_join_distributive() const { return scalar_join_distributive_; }

    // Scalar-invariant upper semilattice (the zero is not required).
    bool is_ifs() const { return scalar_closed_ && usl_; }
    // An IFS whose scalar action also respects the internal join; the
    // structures the representation theorems quantify over.
    bool is_strict_semimodule() const { return is_ifs() && scalar_join_distributive_; }

    // Least carrier element dominating both f and g pointwise.  Throws when
    // the carrier is not an upper semilattice or an argument is missing.
    FiniteFunction internal_join(const FiniteFunction& f, const FiniteFunction& g) const;
    // Same by carrier index; npos when the pair has no least upper bound.
    std::size_t internal_join_index(std::size_t i, std::size_t j) const;
    // Internal sup of a set of carrier indices; the empty sup is zero
    // (throws when zero is not in the carrier).
    FiniteFunction internal_sup(const std::vector<std::size_t>& indices) const;

    // Index of the zero function, or npos.
    std::size_t zero_index() const { return zero_index_; }

    // Carrier indices of the join-irreducible elements: nonzero elements
    // that are not the internal join of two strictly smaller elements.
    // Every carrier element is the internal sup of the irreducibles below it.
    const std::vector<std::size_t>& join_irreducibles() const;

private:
    Semimodule() = default;
    void compute_flags_();

    std::shared_ptr<const PointSet> domain_;
    Semiring sr_ = Semiring::boolean();
    std::vector<FiniteFunction> carrier_;
    std::vector<std::size_t> join_table_; // size*size, npos = no internal join
    std::vector<std::size_t> join_irreducibles_;
    std::size_t zero_index_ = npos;
    bool full_ = false;
    bool materialized_ = true;
    bool contains_zero_ = false;
    bool scalar_closed_ = false;
    bool usl_ = false;
    bool b_sub_ = false;
    bool inf_closed_ = false;
    bool nondegenerate_ = false;
    bool admissible_ = false;
    bool scalar_join_distributive_ = false;
};

} // namespace idemlin
