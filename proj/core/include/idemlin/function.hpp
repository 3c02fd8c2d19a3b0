#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "idemlin/semiring.hpp"

namespace idemlin {

// A finite set of named points; the common domain X of a function space K(X).
struct PointSet {
    std::vector<std::string> labels;

    explicit PointSet(std::vector<std::string> l) : labels(std::move(l)) {}
    static std::shared_ptr<const PointSet> make(std::vector<std::string> labels) {
        return std::make_shared<const PointSet>(std::move(labels));
    }
    // Convenience: points named "x1".."xN".
    static std::shared_ptr<const PointSet> numbered(std::size_t n);

    std::size_t size() const { return labels.size(); }
    // Returns the index of `label`, or npos when absent.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const std::string& label) const;
};

// An element of K(X): a function from a finite point set into a semiring.
class FiniteFunction {
public:
    FiniteFunction(std::shared_ptr<const PointSet> domain, Semiring sr,
                   std::vector<SemiringValue> values);

    const std::shared_ptr<const PointSet>& domain() const { return domain_; }
    const Semiring& semiring() const { return sr_; }
    std::size_t size() const { return values_.size(); }
    const SemiringValue& at(std::size_t i) const { return values_.at(i); }
    const std::vector<SemiringValue>& values() const { return values_; }
    void set(std::size_t i, const SemiringValue& v);

    bool operator==(const FiniteFunction& other) const;
    bool operator!=(const FiniteFunction& other) const { return !(*this == other); }
    std::string str() const;

private:
    std::shared_ptr<const PointSet> domain_;
    Semiring sr_;
    std::vector<SemiringValue> values_;
};

// Strict weak order on same-space functions, for use as a container key.
// Lexicographic over value_less; unrelated to the pointwise order below.
bool function_less(const FiniteFunction& a, const FiniteFunction& b);

// Pointwise canonical order: f <= g at every point.
bool function_leq(const FiniteFunction& f, const FiniteFunction& g);

FiniteFunction zero_function(std::shared_ptr<const PointSet> domain, const Semiring& sr);
FiniteFunction pointwise_sup(const FiniteFunction& f, const FiniteFunction& g);
FiniteFunction pointwise_sup(const std::vector<FiniteFunction>& fs,
                             std::shared_ptr<const PointSet> domain, const Semiring& sr);
// Pointwise infimum; the chain carriers make this the pointwise minimum.
FiniteFunction pointwise_inf(const FiniteFunction& f, const FiniteFunction& g);
FiniteFunction scalar_times(const SemiringValue& lambda, const FiniteFunction& f);

// The unit impulse e_x: one at point `index`, zero elsewhere.
FiniteFunction impulse(std::shared_ptr<const PointSet> domain, const Semiring& sr,
                       std::size_t index);

// delta_x(f) = f(x): evaluation at a point, as a functional on K(X).
inline const SemiringValue& delta_eval(const FiniteFunction& f, std::size_t x) {
    return f.at(x);
}

// Number of functions X -> K for an enumerable K; throws CapExceeded past `cap`.
std::uint64_t function_space_size(std::size_t domain_size, const Semiring& sr,
                                  std::uint64_t cap);

// All functions X -> K in mixed-radix ascending order: the function with
// index m maps point i to the carrier element of index (m / |K|^i) mod |K|,
// so the first point is the least significant digit.  Requires enumerable K.
std::vector<FiniteFunction> enumerate_functions(std::shared_ptr<const PointSet> domain,
                                                const Semiring& sr,
                                                std::uint64_t cap = 1u << 20);

// Index of `f` in the enumeration order above.
std::uint64_t function_index(const FiniteFunction& f);

} // namespace idemlin
