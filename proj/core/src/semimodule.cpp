#include "idemlin/semimodule.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace idemlin {
namespace {

constexpr std::size_t kJoinTableCap = 1024; // above this, joins are computed on demand

struct FnLess {
    bool operator()(const FiniteFunction& a, const FiniteFunction& b) const {
        return function_less(a, b);
    }
};

void validate_member(const FiniteFunction& f, const std::shared_ptr<const PointSet>& domain,
                     const Semiring& sr) {
    if (f.semiring() != sr)
        throw std::invalid_argument("carrier function over " + f.semiring().name() +
                                    " does not match the ambient semiring " + sr.name());
    if (f.domain()->labels != domain->labels)
        throw std::invalid_argument("carrier function domain does not match the point set");
}

} // namespace

const std::vector<FiniteFunction>& Semimodule::carrier() const {
    if (!materialized_)
        throw std::logic_error("full space carrier is not materialized");
    return carrier_;
}

std::size_t Semimodule::size() const { return carrier().size(); }

bool Semimodule::contains(const FiniteFunction& f) const {
    if (!materialized_) {
        // An abstract full space contains every well-typed function.
        return f.semiring() == sr_ && f.domain()->labels == domain_->labels;
    }
    return index_of(f) != npos;
}

std::size_t Semimodule::index_of(const FiniteFunction& f) const {
    if (!materialized_) return npos;
    auto it = std::lower_bound(carrier_.begin(), carrier_.end(), f, FnLess{});
    if (it != carrier_.end() && *it == f)
        return static_cast<std::size_t>(it - carrier_.begin());
    return npos;
}

namespace {

// Least upper bound of carrier elements i and j within the carrier, or npos.
// Fast path: when the pointwise sup itself belongs to the carrier it is the
// least upper bound; otherwise scan the upper-bound set for a minimum.
std::size_t join_index_raw(const std::vector<FiniteFunction>& carrier,
                           std::size_t i, std::size_t j, const Semimodule& self) {
    const FiniteFunction s = pointwise_sup(carrier[i], carrier[j]);
    const std::size_t direct = self.index_of(s);
    if (direct != Semimodule::npos) return direct;
    std::size_t best = Semimodule::npos;
    for (std::size_t k = 0; k < carrier.size(); ++k) {
        if (!function_leq(s, carrier[k])) continue; // not an upper bound
        if (best == Semimodule::npos || function_leq(carrier[k], carrier[best])) best = k;
    }
    if (best == Semimodule::npos) return Semimodule::npos;
    for (std::size_t k = 0; k < carrier.size(); ++k) {
        if (!function_leq(s, carrier[k])) continue;
        if (!function_leq(carrier[best], carrier[k])) return Semimodule::npos; // no least
    }
    return best;
}

} // namespace

std::size_t Semimodule::internal_join_index(std::size_t i, std::size_t j) const {
    const std::size_t n = size();
    if (i >= n || j >= n) throw std::out_of_range("carrier index out of range");
    if (!join_table_.empty()) return join_table_[i * n + j];
    return join_index_raw(carrier_, i, j, *this);
}

FiniteFunction Semimodule::internal_join(const FiniteFunction& f,
                                         const FiniteFunction& g) const {
    if (!materialized_) {
        validate_member(f, domain_, sr_);
        validate_member(g, domain_, sr_);
        return pointwise_sup(f, g); // internal and pointwise coincide on K(X)
    }
    const std::size_t i = index_of(f), j = index_of(g);
    if (i == npos || j == npos)
        throw std::invalid_argument("internal_join arguments must belong to the carrier");
    const std::size_t k = internal_join_index(i, j);
    if (k == npos)
        throw std::invalid_argument("carrier has no least upper bound for " + f.str() +
                                    " and " + g.str());
    return carrier_[k];
}

FiniteFunction Semimodule::internal_sup(const std::vector<std::size_t>& indices) const {
    if (!materialized_)
        throw std::logic_error("internal_sup needs a materialized carrier");
    if (indices.empty()) {
        if (zero_index_ == npos)
            throw std::invalid_argument("empty internal sup needs zero in the carrier");
        return carrier_[zero_index_];
    }
    for (std::size_t idx : indices)
        if (idx >= size()) throw std::out_of_range("carrier index out of range");
    std::size_t acc = indices[0];
    for (std::size_t t = 1; t < indices.size(); ++t) {
        acc = internal_join_index(acc, indices[t]);
        if (acc == npos)
            throw std::invalid_argument("carrier has no least upper bound for the set");
    }
    return carrier_[acc];
}

const std::vector<std::size_t>& Semimodule::join_irreducibles() const {
    if (!materialized_)
        throw std::logic_error("join irreducibles need a materialized carrier");
    if (!usl_)
        throw std::logic_error("join irreducibles need an upper semilattice");
    if (join_table_.empty() && size() > 1)
        throw std::logic_error("join irreducibles not computed for carriers above " +
                               std::to_string(kJoinTableCap) + " elements");
    return join_irreducibles_;
}

void Semimodule::compute_flags_() {
    const std::size_t n = carrier_.size();
    const FiniteFunction zero = zero_function(domain_, sr_);
    zero_index_ = index_of(zero);
    contains_zero_ = zero_index_ != npos;

    // Scalar closure, plus the per-scalar action index table reused below.
    const std::vector<SemiringValue> scalars = sr_.enumerate();
    std::vector<std::vector<std::size_t>> action(scalars.size(),
                                                 std::vector<std::size_t>(n, npos));
    scalar_closed_ = true;
    for (std::size_t s = 0; s < scalars.size(); ++s)
        for (std::size_t i = 0; i < n; ++i) {
            action[s][i] = index_of(scalar_times(scalars[s], carrier_[i]));
            if (action[s][i] == npos) scalar_closed_ = false;
        }

    // Join table (when it fits), semilattice and b-subsemimodule flags,
    // inf-closure, and reducibility marks in one pass over pairs.
    const bool keep_table = n <= kJoinTableCap;
    if (keep_table) join_table_.assign(n * n, npos);
    usl_ = true;
    b_sub_ = true;
    bool infs_in = true;
    std::vector<bool> reducible(n, false);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t k = join_index_raw(carrier_, i, j, *this);
            if (keep_table) {
                join_table_[i * n + j] = k;
                join_table_[j * n + i] = k;
            }
            if (k == npos) {
                usl_ = false;
                b_sub_ = false;
            } else {
                if (!(carrier_[k] == pointwise_sup(carrier_[i], carrier_[j])))
                    b_sub_ = false;
                if (i != k && j != k) reducible[k] = true;
            }
            if (infs_in && index_of(pointwise_inf(carrier_[i], carrier_[j])) == npos)
                infs_in = false;
        }
    inf_closed_ = contains_zero_ && infs_in;

    if (usl_ && (keep_table || n <= 1)) {
        for (std::size_t k = 0; k < n; ++k)
            if (k != zero_index_ && !reducible[k]) join_irreducibles_.push_back(k);
    }

    // Non-degeneracy: every point is hit by a carrier function at the unit.
    const SemiringValue one = sr_.one();
    nondegenerate_ = true;
    for (std::size_t x = 0; x < domain_->size() && nondegenerate_; ++x) {
        bool hit = false;
        for (std::size_t i = 0; i < n && !hit; ++i) hit = (carrier_[i].at(x) == one);
        nondegenerate_ = hit;
    }

    // Admissibility: for every f and x some carrier g has g(x) = 1 and
    // f(x) (.) g below f pointwise.
    admissible_ = true;
    for (std::size_t i = 0; i < n && admissible_; ++i)
        for (std::size_t x = 0; x < domain_->size() && admissible_; ++x) {
            bool found = false;
            for (std::size_t j = 0; j < n && !found; ++j) {
                if (!(carrier_[j].at(x) == one)) continue;
                found = function_leq(scalar_times(carrier_[i].at(x), carrier_[j]),
                                     carrier_[i]);
            }
            admissible_ = found;
        }

    // Scalar action vs. internal join.  Only meaningful for scalar-closed
    // upper semilattices; vacuously false otherwise.
    scalar_join_distributive_ = scalar_closed_ && usl_;
    if (scalar_join_distributive_) {
        for (std::size_t s = 0; s < scalars.size() && scalar_join_distributive_; ++s)
            for (std::size_t i = 0; i < n && scalar_join_distributive_; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    const std::size_t k = internal_join_index(i, j);
                    if (action[s][k] != internal_join_index(action[s][i], action[s][j])) {
                        scalar_join_distributive_ = false;
                        break;
                    }
                }
    }
}

Semimodule Semimodule::from_carrier(std::shared_ptr<const PointSet> domain,
                                    const Semiring& sr,
                                    std::vector<FiniteFunction> carrier) {
    if (!sr.enumerable())
        throw std::invalid_argument(
            "enumerated semimodules need an enumerable semiring; use full() over " +
            sr.name());
    for (const auto& f : carrier) validate_member(f, domain, sr);
    std::sort(carrier.begin(), carrier.end(), FnLess{});
    carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
    Semimodule m;
    m.domain_ = std::move(domain);
    m.sr_ = sr;
    m.carrier_ = std::move(carrier);
    m.compute_flags_();
    return m;
}

Semimodule Semimodule::full(std::shared_ptr<const PointSet> domain, const Semiring& sr,
                            std::uint64_t materialize_cap) {
    Semimodule m;
    m.domain_ = domain;
    m.sr_ = sr;
    m.full_ = true;
    m.contains_zero_ = m.scalar_closed_ = m.usl_ = m.b_sub_ = m.inf_closed_ = true;
    m.nondegenerate_ = m.admissible_ = m.scalar_join_distributive_ = true;
    bool materialize = false;
    if (sr.enumerable()) {
        try {
            function_space_size(domain->size(), sr, materialize_cap);
            materialize = true;
        } catch (const CapExceeded&) {
            materialize = false;
        }
    }
    if (!materialize) {
        m.materialized_ = false;
        return m;
    }
    m.carrier_ = enumerate_functions(domain, sr, materialize_cap);
    std::sort(m.carrier_.begin(), m.carrier_.end(), FnLess{});
    const std::size_t n = m.carrier_.size();
    m.zero_index_ = m.index_of(zero_function(domain, sr));
    if (n <= kJoinTableCap) {
        // On the full space the internal join is the pointwise sup.
        m.join_table_.assign(n * n, npos);
        std::vector<bool> reducible(n, false);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const std::size_t k =
                    m.index_of(pointwise_sup(m.carrier_[i], m.carrier_[j]));
                m.join_table_[i * n + j] = k;
                m.join_table_[j * n + i] = k;
                if (i != k && j != k) reducible[k] = true;
            }
        for (std::size_t k = 0; k < n; ++k)
            if (k != m.zero_index_ && !reducible[k]) m.join_irreducibles_.push_back(k);
    }
    return m;
}

Semimodule Semimodule::close_under(std::shared_ptr<const PointSet> domain,
                                   const Semiring& sr,
                                   const std::vector<FiniteFunction>& generators,
                                   bool inf_close, std::uint64_t cap) {
    if (!sr.enumerable())
        throw std::invalid_argument("close_under needs an enumerable semiring, not " +
                                    sr.name());
    for (const auto& f : generators) validate_member(f, domain, sr);

    std::set<FiniteFunction, FnLess> members;
    std::vector<FiniteFunction> work;
    auto push = [&](FiniteFunction f) {
        if (members.insert(f).second) {
            if (members.size() > cap)
                throw CapExceeded("close_under fixed point exceeds cap " +
                                  std::to_string(cap));
            work.push_back(std::move(f));
        }
    };

    push(zero_function(domain, sr)); // the empty sup
    for (const auto& g : generators) push(g);

    const std::vector<SemiringValue> scalars = sr.enumerate();
    while (!work.empty()) {
        const FiniteFunction f = std::move(work.back());
        work.pop_back();
        for (const auto& lambda : scalars) push(scalar_times(lambda, f));
        for (const auto& g : members) {
            push(pointwise_sup(f, g));
            if (inf_close) push(pointwise_inf(f, g));
        }
    }
    return from_carrier(std::move(domain), sr,
                        std::vector<FiniteFunction>(members.begin(), members.end()));
}

} // namespace idemlin
