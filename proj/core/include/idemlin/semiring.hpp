#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "idemlin/rational.hpp"

namespace idemlin {

// Thrown when a requested element does not exist in the instance at hand
// (e.g. the residual of Bottom in an uncompleted semiring needs Top).
struct Unrepresentable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an enumeration or closure exceeds its configured budget.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SemiringKind { Boolean, MaxPlus, MinPlus, FuzzyChain, SaturatedNat };

// One element of a semiring carrier.
//
// Bottom is always the semiring zero (the least element of the canonical
// order), Top the adjoined greatest element of a completed max-plus or
// min-plus instance.  Finite payloads are exact rationals; the discrete
// instances keep integer payloads (den == 1).  Note the tags name order
// roles, not numeric values: in min-plus, Bottom is numerically +inf.
struct SemiringValue {
    enum class Tag : std::uint8_t { Bottom, Finite, Top };

    Tag tag = Tag::Bottom;
    Rational payload; // meaningful only when tag == Finite

    static SemiringValue bottom() { return {}; }
    static SemiringValue top() { return {Tag::Top, Rational()}; }
    static SemiringValue finite(Rational q) { return {Tag::Finite, q}; }

    bool is_bottom() const { return tag == Tag::Bottom; }
    bool is_top() const { return tag == Tag::Top; }
    bool is_finite() const { return tag == Tag::Finite; }

    friend bool operator==(const SemiringValue& a, const SemiringValue& b) {
        if (a.tag != b.tag) return false;
        return a.tag != Tag::Finite || a.payload == b.payload;
    }
    friend bool operator!=(const SemiringValue& a, const SemiringValue& b) { return !(a == b); }

    std::string str() const {
        switch (tag) {
            case Tag::Bottom: return "bot";
            case Tag::Top: return "top";
            default: return payload.str();
        }
    }
};

// Container ordering on values: tag rank, then numeric payload.  This is a
// fixed total order used for canonical sorting and lookups; it coincides
// with the canonical semiring order for every built-in instance except
// min-plus, where the canonical order reverses the numeric one.
inline bool value_less(const SemiringValue& a, const SemiringValue& b) {
    if (a.tag != b.tag) return (int)a.tag < (int)b.tag;
    if (a.tag != SemiringValue::Tag::Finite) return false;
    return a.payload < b.payload;
}

// A boundedly complete idempotent semiring instance.
//
// Five instances are provided:
//   boolean           ({0,1}, or, and)
//   max-plus          (Q u {-inf} [u {+inf}], max, +)
//   min-plus          (Q u {+inf} [u {-inf}], min, +)
//   fuzzy-chain(N)    ({0..N}, max, min)
//   saturated-nat(N)  ({Bottom, 0..N}, max, saturating +)
//
// All five carriers are totally ordered by the canonical order
// x <= y  iff  oplus(x, y) == y, so sups and infs of finite sets are
// attained at elements of the set.
class Semiring {
public:
    static Semiring boolean();
    static Semiring max_plus(bool completed = true);
    static Semiring min_plus(bool completed = true);
    static Semiring fuzzy_chain(int n);
    static Semiring saturated_nat(int n);

    SemiringKind kind() const { return kind_; }
    int chain_height() const { return n_; }
    bool completed() const { return completed_; }
    bool enumerable() const { return enumerable_; }
    bool semifield() const { return semifield_; }
    bool has_top() const { return has_top_; }
    std::string name() const;

    friend bool operator==(const Semiring& a, const Semiring& b) {
        return a.kind_ == b.kind_ && a.n_ == b.n_ && a.completed_ == b.completed_;
    }
    friend bool operator!=(const Semiring& a, const Semiring& b) { return !(a == b); }

    SemiringValue zero() const { return SemiringValue::bottom(); }
    SemiringValue one() const;
    SemiringValue top() const; // throws Unrepresentable if no greatest element

    // Builds the canonical representation of an integer level / rational
    // payload, folding values that coincide with Bottom (e.g. level 0 of a
    // fuzzy chain) onto the Bottom tag.  Throws on out-of-range payloads.
    SemiringValue make(const Rational& q) const;
    SemiringValue make_int(std::int64_t k) const { return make(Rational(k)); }

    // True iff v is a canonical element of this instance.
    bool valid(const SemiringValue& v) const;

    SemiringValue oplus(const SemiringValue& a, const SemiringValue& b) const;
    SemiringValue otimes(const SemiringValue& a, const SemiringValue& b) const;

    // Canonical partial order: leq(a, b) iff oplus(a, b) == b.
    bool leq(const SemiringValue& a, const SemiringValue& b) const;

    // Least upper bound of a finite set (Bottom for the empty set).
    SemiringValue sup(const std::vector<SemiringValue>& xs) const;
    // Greatest lower bound of a finite nonempty set.
    SemiringValue inf(const std::vector<SemiringValue>& xs) const;

    // residual(a, b) = sup { v : otimes(a, v) <= b }.  Total on completed
    // instances; throws Unrepresentable when the sup would need a missing
    // Top.  Conventions at the boundary: residual(Top, b) = Bottom for
    // b < Top, residual(a, Top) = Top, residual(Bottom, b) = Top.
    SemiringValue residual(const SemiringValue& a, const SemiringValue& b) const;

    // Multiplicative inverse of a finite nonzero element of a semifield.
    SemiringValue invert(const SemiringValue& a) const;

    // Full carrier in ascending canonical order; throws for max/min-plus.
    std::vector<SemiringValue> enumerate() const;
    std::size_t carrier_size() const; // throws for non-enumerable instances

    // Deterministic sample for law checks on non-enumerable instances:
    // mixes Bottom, Top (when present) and small rationals.
    SemiringValue sample(std::mt19937_64& rng) const;

    std::string describe_value(const SemiringValue& v) const;

private:
    Semiring(SemiringKind k, int n, bool completed);

    void require_valid(const SemiringValue& v) const;

    SemiringKind kind_;
    int n_;
    bool completed_;
    bool enumerable_;
    bool semifield_;
    bool has_top_;
};

} // namespace idemlin
