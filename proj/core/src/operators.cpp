#include "idemlin/operators.hpp"

#include <algorithm>

namespace idemlin {
namespace {

void require_same_points(const PointSet& a, const PointSet& b, const char* what) {
    if (a.labels != b.labels)
        throw std::invalid_argument(std::string(what) + ": point sets differ");
}

bool is_zero(const FiniteFunction& f) {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!f.at(i).is_bottom()) return false;
    return true;
}

} // namespace

const FiniteFunction& OperatorTable::apply(const FiniteFunction& f) const {
    const std::size_t i = source->index_of(f);
    if (i == Semimodule::npos)
        throw std::invalid_argument("operator applied outside its source carrier: " +
                                    f.str());
    return table.at(i);
}

OperatorTable make_operator(SemimodulePtr source, SemimodulePtr target,
                            std::vector<FiniteFunction> table) {
    if (!source || !target) throw std::invalid_argument("operator needs source and target");
    if (!source->materialized())
        throw std::invalid_argument("operator tables need an enumerated source carrier");
    if (source->semiring() != target->semiring())
        throw std::invalid_argument("operator source and target use different semirings");
    if (table.size() != source->size())
        throw std::invalid_argument("operator table has " + std::to_string(table.size()) +
                                    " entries for " + std::to_string(source->size()) +
                                    " carrier elements");
    for (const auto& image : table)
        if (!target->contains(image))
            throw std::invalid_argument("operator image " + image.str() +
                                        " is not in the target");
    OperatorTable A;
    A.source = std::move(source);
    A.target = std::move(target);
    A.table = std::move(table);
    return A;
}

OperatorTable identity_table(const SemimodulePtr& V) {
    return make_operator(V, V, V->carrier());
}

SemimodulePtr scalar_space(const Semiring& sr) {
    return std::make_shared<const Semimodule>(
        Semimodule::full(PointSet::make({"*"}), sr));
}

FiniteFunction scalar_element(const Semiring& sr, const SemiringValue& v) {
    return FiniteFunction(PointSet::make({"*"}), sr, {v});
}

OperatorTable delta_functional(const SemimodulePtr& V, std::size_t x) {
    const Semiring& sr = V->semiring();
    std::vector<FiniteFunction> table;
    table.reserve(V->size());
    for (const auto& f : V->carrier()) table.push_back(scalar_element(sr, f.at(x)));
    return make_operator(V, scalar_space(sr), std::move(table));
}

const SemiringValue& functional_value(const OperatorTable& phi, std::size_t i) {
    return phi.table.at(i).at(0);
}

KernelMatrix make_kernel(std::shared_ptr<const PointSet> source,
                         std::shared_ptr<const PointSet> target, const Semiring& sr,
                         std::vector<FiniteFunction> rows) {
    if (rows.size() != source->size())
        throw std::invalid_argument("kernel has " + std::to_string(rows.size()) +
                                    " rows for " + std::to_string(source->size()) +
                                    " source points");
    for (const auto& row : rows) {
        if (row.semiring() != sr)
            throw std::invalid_argument("kernel row semiring mismatch");
        require_same_points(*row.domain(), *target, "kernel row");
    }
    KernelMatrix k;
    k.source = std::move(source);
    k.target = std::move(target);
    k.sr = sr;
    k.rows = std::move(rows);
    return k;
}

KernelMatrix make_kernel(std::shared_ptr<const PointSet> source,
                         std::shared_ptr<const PointSet> target, const Semiring& sr,
                         const std::vector<std::vector<SemiringValue>>& matrix) {
    std::vector<FiniteFunction> rows;
    rows.reserve(matrix.size());
    for (const auto& row : matrix) rows.emplace_back(target, sr, row);
    return make_kernel(std::move(source), target, sr, std::move(rows));
}

FiniteFunction internal_sum(const Semimodule& W, const std::vector<FiniteFunction>& terms) {
    if (!W.materialized()) {
        FiniteFunction acc = zero_function(W.domain(), W.semiring());
        for (const auto& t : terms) acc = pointwise_sup(acc, t);
        return acc;
    }
    // Zero summands are neutral for the sup and are dropped, so a missing
    // zero element in W never forces a spurious escape.
    std::size_t acc = Semimodule::npos;
    for (const auto& term : terms) {
        if (is_zero(term)) continue;
        const std::size_t t = W.index_of(term);
        if (t == Semimodule::npos)
            throw EscapeError("summand " + term.str() + " escapes the target carrier");
        if (acc == Semimodule::npos) {
            acc = t;
        } else {
            acc = W.internal_join_index(acc, t);
            if (acc == Semimodule::npos)
                throw EscapeError("partial sup has no least upper bound in the target");
        }
    }
    if (acc == Semimodule::npos) {
        const FiniteFunction zero = zero_function(W.domain(), W.semiring());
        if (W.index_of(zero) == Semimodule::npos)
            throw EscapeError("zero result escapes a target without zero");
        return zero;
    }
    return W.element(acc);
}

FiniteFunction apply_integral(const KernelMatrix& k, const FiniteFunction& f,
                              const Semimodule& W) {
    require_same_points(*f.domain(), *k.source, "apply_integral input");
    require_same_points(*W.domain(), *k.target, "apply_integral target");
    std::vector<FiniteFunction> terms;
    terms.reserve(k.rows.size());
    for (std::size_t x = 0; x < k.rows.size(); ++x)
        terms.push_back(scalar_times(f.at(x), k.rows[x]));
    return internal_sum(W, terms);
}

FiniteFunction apply_kernel_pointwise(const KernelMatrix& k, const FiniteFunction& f) {
    require_same_points(*f.domain(), *k.source, "apply_kernel_pointwise input");
    FiniteFunction acc = zero_function(k.target, k.sr);
    for (std::size_t x = 0; x < k.rows.size(); ++x)
        acc = pointwise_sup(acc, scalar_times(f.at(x), k.rows[x]));
    return acc;
}

OperatorTable operator_from_kernel(const KernelMatrix& k, const SemimodulePtr& V,
                                   const SemimodulePtr& W) {
    std::vector<FiniteFunction> table;
    table.reserve(V->size());
    for (const auto& f : V->carrier()) table.push_back(apply_integral(k, f, *W));
    return make_operator(V, W, std::move(table));
}

bool is_b_linear(const OperatorTable& A) {
    const Semimodule& V = *A.source;
    const Semimodule& W = *A.target;
    const Semiring& sr = V.semiring();
    const std::size_t n = V.size();

    if (V.zero_index() != Semimodule::npos &&
        !is_zero(A.table[V.zero_index()]))
        return false;

    for (const auto& lambda : sr.enumerate())
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = V.index_of(scalar_times(lambda, V.element(i)));
            if (j == Semimodule::npos) continue; // outside the carrier: no constraint
            if (!(A.table[j] == scalar_times(lambda, A.table[i]))) return false;
        }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const std::size_t k = V.internal_join_index(i, j);
            if (k == Semimodule::npos) continue; // pair has no join: no constraint
            if (!W.materialized()) {
                if (!(A.table[k] == pointwise_sup(A.table[i], A.table[j]))) return false;
            } else {
                const std::size_t wi = W.index_of(A.table[i]);
                const std::size_t wj = W.index_of(A.table[j]);
                const std::size_t wk = W.internal_join_index(wi, wj);
                if (wk == Semimodule::npos) return false; // images have no join
                if (!(A.table[k] == W.element(wk))) return false;
            }
        }
    return true;
}

bool is_b_linear_sampled(const std::function<FiniteFunction(const FiniteFunction&)>& A,
                         const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                         std::mt19937_64& rng, int trials) {
    auto random_fn = [&]() {
        std::vector<SemiringValue> values;
        values.reserve(X->size());
        for (std::size_t i = 0; i < X->size(); ++i) values.push_back(sr.sample(rng));
        return FiniteFunction(X, sr, std::move(values));
    };
    const FiniteFunction zero = zero_function(X, sr);
    if (!is_zero(A(zero))) return false;
    for (int t = 0; t < trials; ++t) {
        const FiniteFunction f = random_fn();
        const FiniteFunction g = random_fn();
        const SemiringValue lambda = sr.sample(rng);
        const FiniteFunction lhs = A(pointwise_sup(scalar_times(lambda, f), g));
        const FiniteFunction rhs = pointwise_sup(scalar_times(lambda, A(f)), A(g));
        if (!(lhs == rhs)) return false;
    }
    return true;
}

namespace {

// k_raw(x) = inf_f residual(f(x), Af), pointwise over the target points.
// Every kernel row of A lies below this bound (Galois property of the
// residual), which makes it the pointwise-maximal kernel over a full target.
std::vector<FiniteFunction> residuation_bound(const OperatorTable& A) {
    const Semimodule& V = *A.source;
    const Semiring& sr = V.semiring();
    const auto& X = V.domain();
    const auto& Y = A.target->domain();
    std::vector<FiniteFunction> rows;
    rows.reserve(X->size());
    for (std::size_t x = 0; x < X->size(); ++x) {
        std::vector<SemiringValue> row;
        row.reserve(Y->size());
        for (std::size_t y = 0; y < Y->size(); ++y) {
            std::vector<SemiringValue> bounds;
            bounds.reserve(V.size());
            for (std::size_t i = 0; i < V.size(); ++i)
                bounds.push_back(sr.residual(V.element(i).at(x), A.table[i].at(y)));
            row.push_back(sr.inf(bounds));
        }
        rows.emplace_back(Y, sr, std::move(row));
    }
    return rows;
}

// Visits the digit vector (row indices into W's carrier) of every kernel
// that reproduces A, in ascending mixed-radix order with the first source
// point as the least significant digit; stops when the visitor returns
// false.  Shared by the exhaustive maximal-kernel computation and the
// existence fallback used when the maximal kernel is undefined.
void scan_valid_kernels(const OperatorTable& A, std::uint64_t cap,
                        const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    const Semimodule& V = *A.source;
    const Semimodule& W = *A.target;
    const Semiring& sr = V.semiring();
    const std::size_t nx = V.domain()->size();
    const std::size_t nw = W.size();

    std::uint64_t total = 1;
    for (std::size_t x = 0; x < nx; ++x) {
        if (nw == 0 || total > cap / nw)
            throw CapExceeded("kernel enumeration exceeds cap " + std::to_string(cap));
        total *= nw;
    }

    // Scalar-action index table: act[s][w] = index of scalar_s (.) w in W.
    const std::vector<SemiringValue> scalars = sr.enumerate();
    auto scalar_index = [&](const SemiringValue& v) {
        for (std::size_t s = 0; s < scalars.size(); ++s)
            if (scalars[s] == v) return s;
        throw std::logic_error("value missing from the enumerated scalar carrier");
    };
    std::vector<std::vector<std::size_t>> act(scalars.size(),
                                              std::vector<std::size_t>(nw));
    std::vector<std::vector<bool>> zero_term(scalars.size(), std::vector<bool>(nw));
    for (std::size_t s = 0; s < scalars.size(); ++s)
        for (std::size_t w = 0; w < nw; ++w) {
            const FiniteFunction t = scalar_times(scalars[s], W.element(w));
            act[s][w] = W.index_of(t);
            zero_term[s][w] = is_zero(t);
        }

    std::vector<std::vector<std::size_t>> fidx(V.size(), std::vector<std::size_t>(nx));
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t x = 0; x < nx; ++x)
            fidx[i][x] = scalar_index(V.element(i).at(x));

    std::vector<std::size_t> want(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) want[i] = W.index_of(A.table[i]);

    const std::size_t zi = W.zero_index();
    const std::size_t zero_scalar = scalar_index(sr.zero());

    auto eval = [&](const std::vector<std::size_t>& digits, std::size_t i)
        -> std::size_t { // index of apply_integral for carrier element i, npos = escape
        std::size_t acc = Semimodule::npos;
        for (std::size_t x = 0; x < nx; ++x) {
            const std::size_t s = fidx[i][x];
            if (s == zero_scalar) continue; // zero summand
            if (zero_term[s][digits[x]]) continue;
            const std::size_t t = act[s][digits[x]];
            if (t == Semimodule::npos) return Semimodule::npos;
            acc = (acc == Semimodule::npos) ? t : W.internal_join_index(acc, t);
            if (acc == Semimodule::npos) return Semimodule::npos;
        }
        return acc == Semimodule::npos ? zi : acc;
    };
    auto valid = [&](const std::vector<std::size_t>& digits) {
        for (std::size_t i = 0; i < V.size(); ++i)
            if (eval(digits, i) != want[i]) return false;
        return true;
    };

    std::vector<std::size_t> digits(nx, 0);
    for (std::uint64_t m = 0; m < total; ++m) {
        std::uint64_t rest = m;
        for (std::size_t x = 0; x < nx; ++x) {
            digits[x] = static_cast<std::size_t>(rest % nw);
            rest /= nw;
        }
        if (!valid(digits)) continue;
        if (!visit(digits)) return;
    }
}

KernelMatrix kernel_from_digits(const OperatorTable& A,
                                const std::vector<std::size_t>& digits) {
    const Semimodule& V = *A.source;
    const Semimodule& W = *A.target;
    std::vector<FiniteFunction> rows;
    rows.reserve(digits.size());
    for (std::size_t d : digits) rows.push_back(W.element(d));
    return make_kernel(V.domain(), W.domain(), V.semiring(), std::move(rows));
}

// Exhaustive maximal kernel over an enumerated target that is not a
// b-subsemimodule: join the valid kernels and check the join still works.
KernelMatrix max_kernel_exhaustive(const OperatorTable& A, std::uint64_t cap) {
    const Semimodule& W = *A.target;
    std::vector<std::size_t> best;
    bool found = false;
    bool joinable = true;
    scan_valid_kernels(A, cap, [&](const std::vector<std::size_t>& digits) {
        if (!found) {
            best = digits;
            found = true;
            return true;
        }
        for (std::size_t x = 0; x < best.size(); ++x) {
            best[x] = W.internal_join_index(best[x], digits[x]);
            if (best[x] == Semimodule::npos) {
                joinable = false;
                return false;
            }
        }
        return true;
    });
    if (!found)
        throw NoKernelError("no kernel over the enumerated target reproduces the operator");
    if (!joinable)
        throw MaxKernelUndefined("valid kernels have rows with no least upper bound");
    KernelMatrix k = kernel_from_digits(A, best);
    for (std::size_t i = 0; i < A.source->size(); ++i) {
        bool ok = true;
        try {
            ok = apply_integral(k, A.source->element(i), W) == A.table[i];
        } catch (const EscapeError&) {
            ok = false;
        }
        if (!ok)
            throw MaxKernelUndefined("the join of all valid kernels is not itself a kernel");
    }
    return k;
}

// First representing kernel in enumeration order, if any: the existence
// decision stays meaningful even when the maximal kernel is undefined.
std::optional<KernelMatrix> any_kernel_exhaustive(const OperatorTable& A,
                                                  std::uint64_t cap) {
    std::optional<std::vector<std::size_t>> first;
    scan_valid_kernels(A, cap, [&](const std::vector<std::size_t>& digits) {
        first = digits;
        return false;
    });
    if (!first) return std::nullopt;
    return kernel_from_digits(A, *first);
}

} // namespace

KernelMatrix max_kernel(const OperatorTable& A, std::uint64_t enumeration_cap) {
    const Semimodule& V = *A.source;
    const Semimodule& W = *A.target;
    if (V.size() == 0)
        throw std::invalid_argument("max_kernel needs a nonempty source carrier");

    if (W.is_full())
        return make_kernel(V.domain(), W.domain(), V.semiring(), residuation_bound(A));

    if (W.is_b_subsemimodule()) {
        // Snap each raw row down to the largest W element below it: the sup
        // of all carrier elements under the bound (a W element, since the
        // carrier is closed under pointwise sups).
        const std::vector<FiniteFunction> raw = residuation_bound(A);
        std::vector<FiniteFunction> rows;
        rows.reserve(raw.size());
        for (const auto& bound : raw) {
            bool any = false;
            FiniteFunction acc = zero_function(W.domain(), V.semiring());
            for (const auto& w : W.carrier())
                if (function_leq(w, bound)) {
                    acc = any ? pointwise_sup(acc, w) : w;
                    any = true;
                }
            if (!any)
                throw NoKernelError("no target element fits under the kernel bound");
            rows.push_back(std::move(acc));
        }
        KernelMatrix k = make_kernel(V.domain(), W.domain(), V.semiring(), std::move(rows));
        // If any kernel reproduces A, the snapped bound does (it dominates
        // that kernel and stays under the raw bound); so one validation pass
        // decides existence.
        for (std::size_t i = 0; i < V.size(); ++i)
            if (apply_kernel_pointwise(k, V.element(i)) != A.table[i])
                throw NoKernelError(
                    "no kernel over the enumerated target reproduces the operator");
        return k;
    }

    return max_kernel_exhaustive(A, enumeration_cap);
}

KernelMatrix max_kernel_full(const std::function<FiniteFunction(const FiniteFunction&)>& A,
                             const std::shared_ptr<const PointSet>& X, const Semiring& sr) {
    std::vector<FiniteFunction> rows;
    rows.reserve(X->size());
    for (std::size_t x = 0; x < X->size(); ++x) rows.push_back(A(impulse(X, sr, x)));
    std::shared_ptr<const PointSet> Y = rows.empty() ? X : rows.front().domain();
    return make_kernel(X, std::move(Y), sr, std::move(rows));
}

std::optional<KernelMatrix> integral_representation(const OperatorTable& A,
                                                    std::uint64_t enumeration_cap) {
    std::optional<KernelMatrix> k;
    try {
        k = max_kernel(A, enumeration_cap);
    } catch (const NoKernelError&) {
        return std::nullopt;
    } catch (const MaxKernelUndefined&) {
        // Representing kernels exist but have no greatest element; any one
        // of them still witnesses integrality.
        return any_kernel_exhaustive(A, enumeration_cap);
    }
    try {
        for (std::size_t i = 0; i < A.source->size(); ++i)
            if (!(apply_integral(*k, A.source->element(i), *A.target) == A.table[i]))
                return std::nullopt;
    } catch (const EscapeError&) {
        return std::nullopt;
    }
    return k;
}

bool has_integral_representation(const OperatorTable& A, std::uint64_t enumeration_cap) {
    return integral_representation(A, enumeration_cap).has_value();
}

bool has_approximation_property(const SemimodulePtr& V, std::uint64_t enumeration_cap) {
    return has_integral_representation(identity_table(V), enumeration_cap);
}

std::vector<KernelMatrix> enumerate_kernels(const std::shared_ptr<const PointSet>& X,
                                            const Semimodule& W, std::uint64_t cap) {
    const std::size_t nx = X->size();
    const std::size_t nw = W.size();
    std::uint64_t total = 1;
    for (std::size_t x = 0; x < nx; ++x) {
        if (nw == 0 || total > cap / nw)
            throw CapExceeded("kernel enumeration exceeds cap " + std::to_string(cap));
        total *= nw;
    }
    std::vector<KernelMatrix> out;
    out.reserve(total);
    for (std::uint64_t m = 0; m < total; ++m) {
        std::vector<FiniteFunction> rows;
        rows.reserve(nx);
        std::uint64_t rest = m;
        for (std::size_t x = 0; x < nx; ++x) {
            rows.push_back(W.element(static_cast<std::size_t>(rest % nw)));
            rest /= nw;
        }
        out.push_back(make_kernel(X, W.domain(), W.semiring(), std::move(rows)));
    }
    return out;
}

} // namespace idemlin
