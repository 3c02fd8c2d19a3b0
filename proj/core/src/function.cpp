#include "idemlin/function.hpp"

#include <stdexcept>

namespace idemlin {

std::shared_ptr<const PointSet> PointSet::numbered(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return make(std::move(labels));
}

std::size_t PointSet::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    return npos;
}

FiniteFunction::FiniteFunction(std::shared_ptr<const PointSet> domain, Semiring sr,
                               std::vector<SemiringValue> values)
    : domain_(std::move(domain)), sr_(std::move(sr)), values_(std::move(values)) {
    if (!domain_) throw std::invalid_argument("function needs a domain");
    if (values_.size() != domain_->size())
        throw std::invalid_argument("function has " + std::to_string(values_.size()) +
                                    " values for " + std::to_string(domain_->size()) +
                                    " points");
    for (const auto& v : values_)
        if (!sr_.valid(v))
            throw std::invalid_argument("function value " + v.str() +
                                        " is not an element of " + sr_.name());
}

void FiniteFunction::set(std::size_t i, const SemiringValue& v) {
    if (!sr_.valid(v))
        throw std::invalid_argument("function value " + v.str() +
                                    " is not an element of " + sr_.name());
    values_.at(i) = v;
}

bool FiniteFunction::operator==(const FiniteFunction& other) const {
    return sr_ == other.sr_ && domain_->labels == other.domain_->labels &&
           values_ == other.values_;
}

std::string FiniteFunction::str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ", ";
        out += sr_.describe_value(values_[i]);
    }
    out += ")";
    return out;
}

bool function_less(const FiniteFunction& a, const FiniteFunction& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (value_less(a.at(i), b.at(i))) return true;
        if (value_less(b.at(i), a.at(i))) return false;
    }
    return false;
}

bool function_leq(const FiniteFunction& f, const FiniteFunction& g) {
    const Semiring& sr = f.semiring();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!sr.leq(f.at(i), g.at(i))) return false;
    return true;
}

FiniteFunction zero_function(std::shared_ptr<const PointSet> domain, const Semiring& sr) {
    std::vector<SemiringValue> values(domain->size(), sr.zero());
    return FiniteFunction(std::move(domain), sr, std::move(values));
}

FiniteFunction pointwise_sup(const FiniteFunction& f, const FiniteFunction& g) {
    const Semiring& sr = f.semiring();
    std::vector<SemiringValue> values;
    values.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) values.push_back(sr.oplus(f.at(i), g.at(i)));
    return FiniteFunction(f.domain(), sr, std::move(values));
}

FiniteFunction pointwise_sup(const std::vector<FiniteFunction>& fs,
                             std::shared_ptr<const PointSet> domain, const Semiring& sr) {
    FiniteFunction acc = zero_function(std::move(domain), sr);
    for (const auto& f : fs) acc = pointwise_sup(acc, f);
    return acc;
}

FiniteFunction pointwise_inf(const FiniteFunction& f, const FiniteFunction& g) {
    const Semiring& sr = f.semiring();
    std::vector<SemiringValue> values;
    values.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        values.push_back(sr.inf({f.at(i), g.at(i)}));
    return FiniteFunction(f.domain(), sr, std::move(values));
}

FiniteFunction scalar_times(const SemiringValue& lambda, const FiniteFunction& f) {
    const Semiring& sr = f.semiring();
    std::vector<SemiringValue> values;
    values.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) values.push_back(sr.otimes(lambda, f.at(i)));
    return FiniteFunction(f.domain(), sr, std::move(values));
}

FiniteFunction impulse(std::shared_ptr<const PointSet> domain, const Semiring& sr,
                       std::size_t index) {
    std::vector<SemiringValue> values(domain->size(), sr.zero());
    values.at(index) = sr.one();
    return FiniteFunction(std::move(domain), sr, std::move(values));
}

std::uint64_t function_space_size(std::size_t domain_size, const Semiring& sr,
                                  std::uint64_t cap) {
    const std::uint64_t k = static_cast<std::uint64_t>(sr.carrier_size());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < domain_size; ++i) {
        if (total > cap / k)
            throw CapExceeded("function space over " + std::to_string(domain_size) +
                              " points exceeds cap " + std::to_string(cap));
        total *= k;
    }
    if (total > cap)
        throw CapExceeded("function space over " + std::to_string(domain_size) +
                          " points exceeds cap " + std::to_string(cap));
    return total;
}

std::vector<FiniteFunction> enumerate_functions(std::shared_ptr<const PointSet> domain,
                                                const Semiring& sr, std::uint64_t cap) {
    const std::vector<SemiringValue> carrier = sr.enumerate();
    const std::uint64_t k = carrier.size();
    const std::uint64_t total = function_space_size(domain->size(), sr, cap);
    std::vector<FiniteFunction> out;
    out.reserve(total);
    for (std::uint64_t m = 0; m < total; ++m) {
        std::vector<SemiringValue> values;
        values.reserve(domain->size());
        std::uint64_t rest = m;
        for (std::size_t i = 0; i < domain->size(); ++i) {
            values.push_back(carrier[rest % k]);
            rest /= k;
        }
        out.emplace_back(domain, sr, std::move(values));
    }
    return out;
}

std::uint64_t function_index(const FiniteFunction& f) {
    const Semiring& sr = f.semiring();
    const std::vector<SemiringValue> carrier = sr.enumerate();
    const std::uint64_t k = carrier.size();
    std::uint64_t index = 0;
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::uint64_t digit = 0;
        while (digit < k && !(carrier[digit] == f.at(i))) ++digit;
        if (digit == k)
            throw std::invalid_argument("function value outside the enumerated carrier");
        index += digit * place;
        place *= k;
    }
    return index;
}

} // namespace idemlin
