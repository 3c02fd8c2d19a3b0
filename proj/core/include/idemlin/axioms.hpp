#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "idemlin/semiring.hpp"

namespace idemlin {

// One witnessed law violation: the law's name and the triple that broke it.
struct LawViolation {
    std::string law;
    std::vector<SemiringValue> witness;
};

struct LawReport {
    bool exhaustive = false;
    std::uint64_t triples_checked = 0;
    std::vector<LawViolation> violations; // at most one stored witness per law

    bool ok() const { return violations.empty(); }
    bool violated(const std::string& law) const {
        for (const auto& v : violations)
            if (v.law == law) return true;
        return false;
    }
};

// The operations under test, abstracted so a test can deliberately corrupt
// one of them and watch the checker notice.  `residual` may be absent (laws
// that need it are then skipped).
struct AxiomSubject {
    std::function<SemiringValue(const SemiringValue&, const SemiringValue&)> oplus;
    std::function<SemiringValue(const SemiringValue&, const SemiringValue&)> otimes;
    std::function<std::optional<SemiringValue>(const SemiringValue&, const SemiringValue&)> residual;
    SemiringValue zero;
    SemiringValue one;

    // Either a full carrier (exhaustive check) or a sampler.
    std::vector<SemiringValue> carrier;
    std::function<SemiringValue(std::mt19937_64&)> sample;
};

struct AxiomOptions {
    std::uint64_t sample_triples = 10000; // used when the subject is not enumerable
    std::uint64_t seed = 1;
};

AxiomSubject subject_for(const Semiring& sr);

// Checks the semiring laws (idempotency, associativity and commutativity of
// oplus, associativity of otimes, two-sided distributivity, neutrality,
// annihilation, order antisymmetry and transitivity, oplus as least upper
// bound) plus, when residuals are available, the residuation bound and the
// Galois property.  Exhaustive over enumerated carriers, sampled otherwise.
LawReport check_axioms(const AxiomSubject& subject, const AxiomOptions& opt = {});
LawReport check_axioms(const Semiring& sr, const AxiomOptions& opt = {});

} // namespace idemlin
