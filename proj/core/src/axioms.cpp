#include "idemlin/axioms.hpp"

#include <random>

namespace idemlin {
namespace {

void record(LawReport& report, const std::string& law,
            std::vector<SemiringValue> witness) {
    for (const auto& v : report.violations)
        if (v.law == law) return;
    report.violations.push_back(LawViolation{law, std::move(witness)});
}

// Runs every law on one triple (a, b, c); unary laws look only at a, binary
// laws at (a, b).  Sharing one driver keeps exhaustive and sampled modes
// identical apart from how triples are produced.
void check_triple(const AxiomSubject& s, const SemiringValue& a,
                  const SemiringValue& b, const SemiringValue& c,
                  LawReport& report) {
    const auto& oplus = s.oplus;
    const auto& otimes = s.otimes;
    auto leq = [&](const SemiringValue& x, const SemiringValue& y) {
        return oplus(x, y) == y;
    };

    if (oplus(a, a) != a) record(report, "oplus-idempotency", {a});
    if (oplus(a, b) != oplus(b, a)) record(report, "oplus-commutativity", {a, b});
    if (oplus(oplus(a, b), c) != oplus(a, oplus(b, c)))
        record(report, "oplus-associativity", {a, b, c});
    if (otimes(otimes(a, b), c) != otimes(a, otimes(b, c)))
        record(report, "otimes-associativity", {a, b, c});
    if (otimes(a, oplus(b, c)) != oplus(otimes(a, b), otimes(a, c)))
        record(report, "left-distributivity", {a, b, c});
    if (otimes(oplus(b, c), a) != oplus(otimes(b, a), otimes(c, a)))
        record(report, "right-distributivity", {a, b, c});
    if (oplus(a, s.zero) != a || oplus(s.zero, a) != a)
        record(report, "zero-neutrality", {a});
    if (otimes(a, s.one) != a || otimes(s.one, a) != a)
        record(report, "one-neutrality", {a});
    if (otimes(a, s.zero) != s.zero || otimes(s.zero, a) != s.zero)
        record(report, "zero-annihilation", {a});
    if (leq(a, b) && leq(b, a) && a != b)
        record(report, "order-antisymmetry", {a, b});
    if (leq(a, b) && leq(b, c) && !leq(a, c))
        record(report, "order-transitivity", {a, b, c});
    {
        const SemiringValue j = oplus(a, b);
        if (!leq(a, j) || !leq(b, j))
            record(report, "join-upper-bound", {a, b});
        if (leq(a, c) && leq(b, c) && !leq(j, c))
            record(report, "join-least", {a, b, c});
    }
    if (s.residual) {
        if (auto r = s.residual(a, b)) {
            if (!leq(otimes(a, *r), b))
                record(report, "residual-bound", {a, b});
            // Galois property probed at v = c: a (.) v <= b  iff  v <= a\b.
            const bool lhs = leq(otimes(a, c), b);
            const bool rhs = leq(c, *r);
            if (lhs != rhs) record(report, "residuation-galois", {a, b, c});
        }
    }
}

} // namespace

AxiomSubject subject_for(const Semiring& sr) {
    AxiomSubject s;
    s.oplus = [sr](const SemiringValue& a, const SemiringValue& b) {
        return sr.oplus(a, b);
    };
    s.otimes = [sr](const SemiringValue& a, const SemiringValue& b) {
        return sr.otimes(a, b);
    };
    s.residual = [sr](const SemiringValue& a, const SemiringValue& b)
        -> std::optional<SemiringValue> {
        try {
            return sr.residual(a, b);
        } catch (const Unrepresentable&) {
            return std::nullopt; // no top to return, e.g. bot\b without completion
        }
    };
    s.zero = sr.zero();
    s.one = sr.one();
    if (sr.enumerable()) {
        s.carrier = sr.enumerate();
    } else {
        s.sample = [sr](std::mt19937_64& rng) { return sr.sample(rng); };
    }
    return s;
}

LawReport check_axioms(const AxiomSubject& subject, const AxiomOptions& opt) {
    LawReport report;
    if (!subject.carrier.empty()) {
        report.exhaustive = true;
        for (const auto& a : subject.carrier)
            for (const auto& b : subject.carrier)
                for (const auto& c : subject.carrier) {
                    check_triple(subject, a, b, c, report);
                    ++report.triples_checked;
                }
        return report;
    }
    if (!subject.sample)
        throw std::invalid_argument("axiom subject has neither carrier nor sampler");
    report.exhaustive = false;
    std::mt19937_64 rng(opt.seed);
    for (std::uint64_t i = 0; i < opt.sample_triples; ++i) {
        const SemiringValue a = subject.sample(rng);
        const SemiringValue b = subject.sample(rng);
        const SemiringValue c = subject.sample(rng);
        check_triple(subject, a, b, c, report);
        ++report.triples_checked;
    }
    return report;
}

LawReport check_axioms(const Semiring& sr, const AxiomOptions& opt) {
    return check_axioms(subject_for(sr), opt);
}

} // namespace idemlin
