#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "idemlin/semimodule.hpp"

namespace idemlin {

// A value produced by an operation left the enumerated target carrier.
struct EscapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// The operator admits no kernel over the requested target.
struct NoKernelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Valid kernels exist but their join fails to be one (the target lacks the
// semimodule axioms the maximality argument relies on).
struct MaxKernelUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using SemimodulePtr = std::shared_ptr<const Semimodule>;

// A total map between enumerated semimodules, tabled over the source
// carrier.  Functionals are the special case of a one-point full target.
// Linearity is a testable property, not an invariant.
struct OperatorTable {
    SemimodulePtr source;
    SemimodulePtr target;
    std::vector<FiniteFunction> table; // image of the i-th carrier element

    const FiniteFunction& apply_index(std::size_t i) const { return table.at(i); }
    // Image of a source-carrier element; throws when f is not in the carrier.
    const FiniteFunction& apply(const FiniteFunction& f) const;

    bool operator==(const OperatorTable& other) const { return table == other.table; }
    bool operator!=(const OperatorTable& other) const { return !(*this == other); }
};

// Validates sizes, membership of images in the target, and shared semiring.
OperatorTable make_operator(SemimodulePtr source, SemimodulePtr target,
                            std::vector<FiniteFunction> table);

OperatorTable identity_table(const SemimodulePtr& V);

// The one-point full space K({"*"}); functionals are operators into it.
SemimodulePtr scalar_space(const Semiring& sr);
// A scalar wrapped as an element of scalar_space(sr).
FiniteFunction scalar_element(const Semiring& sr, const SemiringValue& v);
// delta_x restricted to V: the functional f |-> f(x).
OperatorTable delta_functional(const SemimodulePtr& V, std::size_t x);
// The scalar a functional assigns to the i-th source-carrier element.
const SemiringValue& functional_value(const OperatorTable& phi, std::size_t i);

// An integral kernel: one target-space element k(x) per source point, so
// the dense matrix view is k(x, y) = rows[x](y).
struct KernelMatrix {
    std::shared_ptr<const PointSet> source; // X
    std::shared_ptr<const PointSet> target; // Y
    Semiring sr = Semiring::boolean();
    std::vector<FiniteFunction> rows; // |X| elements of K(Y)

    const SemiringValue& at(std::size_t x, std::size_t y) const {
        return rows.at(x).at(y);
    }
    bool operator==(const KernelMatrix& other) const { return rows == other.rows; }
    bool operator!=(const KernelMatrix& other) const { return !(*this == other); }
};

KernelMatrix make_kernel(std::shared_ptr<const PointSet> source,
                         std::shared_ptr<const PointSet> target, const Semiring& sr,
                         std::vector<FiniteFunction> rows);
// Rows given as dense value vectors over Y in row-major order.
KernelMatrix make_kernel(std::shared_ptr<const PointSet> source,
                         std::shared_ptr<const PointSet> target, const Semiring& sr,
                         const std::vector<std::vector<SemiringValue>>& matrix);

// Internal sup of finitely many target elements.  Zero summands are neutral
// and dropped; the empty sup is the zero function.  Throws EscapeError when
// a summand or a partial sup is missing from an enumerated target.
FiniteFunction internal_sum(const Semimodule& W, const std::vector<FiniteFunction>& terms);

// (Af)(.) = sup_x f(x) (.) k(x), the sup taken INSIDE the target semimodule
// (its internal join); zero summands are neutral and dropped.  Throws
// EscapeError when a summand or partial sup leaves an enumerated target.
FiniteFunction apply_integral(const KernelMatrix& k, const FiniteFunction& f,
                              const Semimodule& W);
// The pointwise matrix formula in K(Y); agrees with apply_integral whenever
// the target is a b-subsemimodule.
FiniteFunction apply_kernel_pointwise(const KernelMatrix& k, const FiniteFunction& f);

// Tables the operator f |-> apply_integral(k, f, W) over V's carrier.
OperatorTable operator_from_kernel(const KernelMatrix& k, const SemimodulePtr& V,
                                   const SemimodulePtr& W);

// Join preservation (internal joins on both sides), zero preservation, and
// commutation with every enumerable scalar, all checked over the carrier.
bool is_b_linear(const OperatorTable& A);

// Sampled b-linearity of a black-box map on a full space over a
// non-enumerable semiring: A(lambda f + g) = lambda Af + Ag on random inputs.
bool is_b_linear_sampled(const std::function<FiniteFunction(const FiniteFunction&)>& A,
                         const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                         std::mt19937_64& rng, int trials = 64);

// The maximal kernel of A, by residuation: the raw bound is
// k_raw(x) = inf_f residual(f(x), Af) pointwise over Y.  Over a full target
// this is the answer; over an enumerated b-subsemimodule the row is snapped
// down to the sup of carrier elements below the bound; over other enumerated
// targets all |W|^|X| candidate kernels are tried (capped) and joined.
// Throws NoKernelError when no kernel exists over an enumerated target,
// Unrepresentable when residuals need an absent top, CapExceeded past
// `enumeration_cap`, and MaxKernelUndefined when the joined candidate fails.
KernelMatrix max_kernel(const OperatorTable& A, std::uint64_t enumeration_cap = 1u << 20);

// Maximal kernel of a black-box map on the full space K(X): row x is A(e_x),
// the unique kernel of any operator the impulses pin down.
KernelMatrix max_kernel_full(const std::function<FiniteFunction(const FiniteFunction&)>& A,
                             const std::shared_ptr<const PointSet>& X, const Semiring& sr);

// The maximal kernel when it reproduces A on the whole carrier, else nullopt.
std::optional<KernelMatrix> integral_representation(const OperatorTable& A,
                                                    std::uint64_t enumeration_cap = 1u << 20);
bool has_integral_representation(const OperatorTable& A,
                                 std::uint64_t enumeration_cap = 1u << 20);

// Whether the identity on V is integral: by the kernel theorem this decides
// whether every b-linear map out of V has an integral representation.
bool has_approximation_property(const SemimodulePtr& V,
                                std::uint64_t enumeration_cap = 1u << 20);

// All kernels X -> carrier(W) in mixed-radix ascending order (the first
// point is the least significant digit).  Throws CapExceeded past `cap`.
std::vector<KernelMatrix> enumerate_kernels(const std::shared_ptr<const PointSet>& X,
                                            const Semimodule& W, std::uint64_t cap);

} // namespace idemlin
