#include "idemlin/semiring.hpp"

#include <algorithm>

namespace idemlin {

Semiring::Semiring(SemiringKind k, int n, bool completed)
    : kind_(k), n_(n), completed_(completed) {
    switch (kind_) {
        case SemiringKind::Boolean:
            enumerable_ = true;
            semifield_ = true;
            has_top_ = true;
            break;
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus:
            enumerable_ = false;
            semifield_ = true; // the finite part; an adjoined Top has no inverse
            has_top_ = completed_;
            break;
        case SemiringKind::FuzzyChain:
            if (n_ < 1) throw std::invalid_argument("fuzzy-chain: height must be >= 1");
            enumerable_ = true;
            semifield_ = (n_ == 1); // min has no inverses below the top otherwise
            has_top_ = true;
            break;
        case SemiringKind::SaturatedNat:
            if (n_ < 0) throw std::invalid_argument("saturated-nat: bound must be >= 0");
            enumerable_ = true;
            semifield_ = (n_ == 0);
            has_top_ = true;
            break;
    }
}

Semiring Semiring::boolean() { return Semiring(SemiringKind::Boolean, 1, true); }
Semiring Semiring::max_plus(bool completed) { return Semiring(SemiringKind::MaxPlus, 0, completed); }
Semiring Semiring::min_plus(bool completed) { return Semiring(SemiringKind::MinPlus, 0, completed); }
Semiring Semiring::fuzzy_chain(int n) { return Semiring(SemiringKind::FuzzyChain, n, true); }
Semiring Semiring::saturated_nat(int n) { return Semiring(SemiringKind::SaturatedNat, n, true); }

std::string Semiring::name() const {
    switch (kind_) {
        case SemiringKind::Boolean: return "boolean";
        case SemiringKind::MaxPlus: return completed_ ? "max-plus (completed)" : "max-plus";
        case SemiringKind::MinPlus: return completed_ ? "min-plus (completed)" : "min-plus";
        case SemiringKind::FuzzyChain: return "fuzzy-chain(" + std::to_string(n_) + ")";
        case SemiringKind::SaturatedNat: return "saturated-nat(" + std::to_string(n_) + ")";
    }
    return "?";
}

SemiringValue Semiring::one() const {
    switch (kind_) {
        case SemiringKind::Boolean: return SemiringValue::finite(Rational(1));
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus: return SemiringValue::finite(Rational(0));
        case SemiringKind::FuzzyChain: return SemiringValue::finite(Rational(n_));
        case SemiringKind::SaturatedNat: return SemiringValue::finite(Rational(0));
    }
    return {};
}

SemiringValue Semiring::top() const {
    switch (kind_) {
        case SemiringKind::Boolean: return SemiringValue::finite(Rational(1));
        case SemiringKind::FuzzyChain: return SemiringValue::finite(Rational(n_));
        case SemiringKind::SaturatedNat: return SemiringValue::finite(Rational(n_));
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus:
            if (!completed_) throw Unrepresentable(name() + ": no greatest element");
            return SemiringValue::top();
    }
    return {};
}

SemiringValue Semiring::make(const Rational& q) const {
    switch (kind_) {
        case SemiringKind::Boolean:
            if (q == Rational(0)) return SemiringValue::bottom();
            if (q == Rational(1)) return SemiringValue::finite(q);
            throw std::invalid_argument("boolean: payload must be 0 or 1");
        case SemiringKind::FuzzyChain:
            if (q.den() != 1 || q.num() < 0 || q.num() > n_)
                throw std::invalid_argument("fuzzy-chain: payload must be an integer level in 0.." +
                                            std::to_string(n_));
            if (q.num() == 0) return SemiringValue::bottom();
            return SemiringValue::finite(q);
        case SemiringKind::SaturatedNat:
            if (q.den() != 1 || q.num() < 0 || q.num() > n_)
                throw std::invalid_argument("saturated-nat: payload must be an integer in 0.." +
                                            std::to_string(n_));
            return SemiringValue::finite(q);
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus:
            return SemiringValue::finite(q);
    }
    return {};
}

bool Semiring::valid(const SemiringValue& v) const {
    switch (v.tag) {
        case SemiringValue::Tag::Bottom: return true;
        case SemiringValue::Tag::Top: return has_top_ && !enumerable_;
        case SemiringValue::Tag::Finite: break;
    }
    const Rational& q = v.payload;
    switch (kind_) {
        case SemiringKind::Boolean: return q == Rational(1);
        case SemiringKind::FuzzyChain: return q.den() == 1 && q.num() >= 1 && q.num() <= n_;
        case SemiringKind::SaturatedNat: return q.den() == 1 && q.num() >= 0 && q.num() <= n_;
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus: return true;
    }
    return false;
}

void Semiring::require_valid(const SemiringValue& v) const {
    if (!valid(v))
        throw std::invalid_argument(name() + ": value " + v.str() + " is not an element of this instance");
}

SemiringValue Semiring::oplus(const SemiringValue& a, const SemiringValue& b) const {
    require_valid(a);
    require_valid(b);
    if (a.is_bottom()) return b;
    if (b.is_bottom()) return a;
    if (a.is_top() || b.is_top()) return SemiringValue::top();
    switch (kind_) {
        case SemiringKind::Boolean:
            return a; // both are 1
        case SemiringKind::MaxPlus:
        case SemiringKind::FuzzyChain:
        case SemiringKind::SaturatedNat:
            return a.payload < b.payload ? b : a;
        case SemiringKind::MinPlus:
            return b.payload < a.payload ? b : a;
    }
    return a;
}

SemiringValue Semiring::otimes(const SemiringValue& a, const SemiringValue& b) const {
    require_valid(a);
    require_valid(b);
    // Annihilation wins over the adjoined Top: Bottom (.) Top = Bottom.
    if (a.is_bottom() || b.is_bottom()) return SemiringValue::bottom();
    if (a.is_top() || b.is_top()) return SemiringValue::top();
    switch (kind_) {
        case SemiringKind::Boolean:
            return a; // 1 (.) 1
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus:
            return SemiringValue::finite(a.payload + b.payload);
        case SemiringKind::FuzzyChain:
            return a.payload < b.payload ? a : b;
        case SemiringKind::SaturatedNat: {
            Rational s = a.payload + b.payload;
            if (Rational(n_) < s) s = Rational(n_);
            return SemiringValue::finite(s);
        }
    }
    return a;
}

bool Semiring::leq(const SemiringValue& a, const SemiringValue& b) const {
    return oplus(a, b) == b;
}

SemiringValue Semiring::sup(const std::vector<SemiringValue>& xs) const {
    SemiringValue acc = zero();
    for (const auto& x : xs) acc = oplus(acc, x);
    return acc;
}

SemiringValue Semiring::inf(const std::vector<SemiringValue>& xs) const {
    if (xs.empty()) throw std::invalid_argument("inf of empty set");
    // Every built-in carrier is a chain, so the glb of a finite set is its
    // least element under the canonical order.
    SemiringValue acc = xs.front();
    require_valid(acc);
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (leq(xs[i], acc)) acc = xs[i];
    return acc;
}

SemiringValue Semiring::residual(const SemiringValue& a, const SemiringValue& b) const {
    require_valid(a);
    require_valid(b);
    if (a.is_bottom()) {
        if (!has_top_) throw Unrepresentable(name() + ": residual(Bottom, b) needs a greatest element");
        return top();
    }
    if (a.is_top()) return b.is_top() ? SemiringValue::top() : SemiringValue::bottom();
    if (b.is_top()) return SemiringValue::top();
    if (b.is_bottom()) {
        // Largest v with a (.) v = Bottom; for finite a that is Bottom
        // everywhere except the fuzzy chain, where min(a, v) = 0 iff v = 0.
        return SemiringValue::bottom();
    }
    switch (kind_) {
        case SemiringKind::Boolean:
            return b; // residual(1, b) = b
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus:
            return SemiringValue::finite(b.payload - a.payload);
        case SemiringKind::FuzzyChain:
            // Heyting implication on the chain.
            return a.payload <= b.payload ? top() : SemiringValue::finite(b.payload);
        case SemiringKind::SaturatedNat: {
            if (b.payload == Rational(n_)) return top();
            if (b.payload < a.payload) return SemiringValue::bottom();
            return SemiringValue::finite(b.payload - a.payload);
        }
    }
    return {};
}

SemiringValue Semiring::invert(const SemiringValue& a) const {
    require_valid(a);
    if (!semifield_) throw std::domain_error(name() + " is not a semifield");
    if (a.is_bottom()) throw std::domain_error("invert: zero has no inverse");
    if (a.is_top()) throw std::domain_error("invert: the adjoined Top has no inverse");
    switch (kind_) {
        case SemiringKind::Boolean: return a;        // 1^{-1} = 1
        case SemiringKind::FuzzyChain: return a;     // only the unit is invertible (n == 1)
        case SemiringKind::SaturatedNat: return a;   // only 0, and only when n == 0
        case SemiringKind::MaxPlus:
        case SemiringKind::MinPlus: return SemiringValue::finite(-a.payload);
    }
    return a;
}

std::vector<SemiringValue> Semiring::enumerate() const {
    if (!enumerable_) throw std::domain_error(name() + " is not enumerable");
    std::vector<SemiringValue> out;
    out.push_back(zero());
    switch (kind_) {
        case SemiringKind::Boolean:
            out.push_back(one());
            break;
        case SemiringKind::FuzzyChain:
            for (int k = 1; k <= n_; ++k) out.push_back(SemiringValue::finite(Rational(k)));
            break;
        case SemiringKind::SaturatedNat:
            for (int k = 0; k <= n_; ++k) out.push_back(SemiringValue::finite(Rational(k)));
            break;
        default:
            break;
    }
    return out;
}

std::size_t Semiring::carrier_size() const {
    if (!enumerable_) throw std::domain_error(name() + " is not enumerable");
    switch (kind_) {
        case SemiringKind::Boolean: return 2;
        case SemiringKind::FuzzyChain: return (std::size_t)n_ + 1;
        case SemiringKind::SaturatedNat: return (std::size_t)n_ + 2;
        default: return 0;
    }
}

SemiringValue Semiring::sample(std::mt19937_64& rng) const {
    if (enumerable_) {
        auto all = enumerate();
        return all[rng() % all.size()];
    }
    std::uint64_t roll = rng() % 100;
    if (roll < 10) return zero();
    if (roll < 15 && completed_) return SemiringValue::top();
    std::int64_t num = (std::int64_t)(rng() % 61) - 30;
    std::int64_t den = (std::int64_t)(rng() % 10) + 1;
    return SemiringValue::finite(Rational(num, den));
}

std::string Semiring::describe_value(const SemiringValue& v) const {
    if (v.is_bottom()) {
        if (kind_ == SemiringKind::MaxPlus) return "-inf";
        if (kind_ == SemiringKind::MinPlus) return "+inf";
        return kind_ == SemiringKind::SaturatedNat ? "bot" : "0";
    }
    if (v.is_top()) return kind_ == SemiringKind::MinPlus ? "-inf" : "+inf";
    return v.payload.str();
}

} // namespace idemlin
