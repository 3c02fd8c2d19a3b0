#include "idemlin/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "idemlin/io.hpp"

namespace idemlin {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Deterministic sub-seeding
// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t sub_seed(std::uint64_t seed, const std::string& tag, std::uint64_t index) {
    return mix64(mix64(seed ^ fnv1a(tag)) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

// ---------------------------------------------------------------------------
// Check naming
// ---------------------------------------------------------------------------

constexpr const char* kCheckNames[] = {"prop1", "prop2",     "thm1", "thm2",
                                       "prop3", "corollary", "thm3", "thm3a",
                                       "prop4", "thm4",      "prop5"};

// ---------------------------------------------------------------------------
// Evaluation outcome
// ---------------------------------------------------------------------------

struct EvalOutcome {
    enum class Status { Pass, Fail, Skip } status = Status::Pass;
    std::string detail;

    static EvalOutcome pass() { return {Status::Pass, {}}; }
    static EvalOutcome fail(std::string d) { return {Status::Fail, std::move(d)}; }
    static EvalOutcome skip(std::string d) { return {Status::Skip, std::move(d)}; }
};

std::string carrier_brief(const Semimodule& m) {
    std::string out = "{";
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 12); ++i) {
        if (i) out += ",";
        out += m.element(i).str();
    }
    if (n > 12) out += ",...";
    out += "}";
    return out;
}

// ---------------------------------------------------------------------------
// Instance serialization helpers.  Operators inside instances are stored as
// bare row arrays (one row per source-carrier element, values over the
// target's points); the enclosing object names the spaces.
// ---------------------------------------------------------------------------

json operator_rows_json(const OperatorTable& A) {
    json rows = json::array();
    for (const auto& img : A.table) {
        json row = json::array();
        for (const auto& v : img.values()) row.push_back(value_to_json(v));
        rows.push_back(std::move(row));
    }
    return rows;
}

OperatorTable operator_from_rows(const SemimodulePtr& source, const SemimodulePtr& target,
                                 const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.size() != source->size())
        throw ParseError(where + ": expected one row per source-carrier element");
    const Semiring& sr = source->semiring();
    std::vector<FiniteFunction> table;
    table.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != target->domain()->size())
            throw ParseError(where + ": bad row length");
        std::vector<SemiringValue> vals;
        vals.reserve(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            vals.push_back(value_from_json(row[j], sr, where));
        table.emplace_back(target->domain(), sr, std::move(vals));
    }
    return make_operator(source, target, std::move(table));
}

struct OperatorPair {
    SemimodulePtr W;
    OperatorTable A;
};

json pair_to_json(const OperatorPair& p) {
    return json{{"W", semimodule_to_json(*p.W)}, {"A", operator_rows_json(p.A)}};
}

// direction: true = A maps V -> W, false = A maps W -> V.
std::vector<OperatorPair> pairs_from_json(const json& arr, const SemimodulePtr& V,
                                          bool v_is_source, const std::string& where) {
    std::vector<OperatorPair> out;
    if (arr.is_null()) return out;
    if (!arr.is_array()) throw ParseError(where + ": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto& e = arr[i];
        if (!e.is_object()) throw ParseError(where + ": expected pair objects");
        SemimodulePtr W = semimodule_from_json(e.at("W"), where + ".W");
        if (W->semiring() != V->semiring())
            throw ParseError(where + ": pair semiring mismatch");
        OperatorTable A = v_is_source
                              ? operator_from_rows(V, W, e.at("A"), where + ".A")
                              : operator_from_rows(W, V, e.at("A"), where + ".A");
        out.push_back({std::move(W), std::move(A)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// SpaceIndex: bitmask tables over a full function space K(X) (|K(X)| <= 64)
// for fast exhaustive subset filtering.  Bit i refers to the i-th function
// in the mixed-radix enumeration order, so bit 0 is the zero function.
// ---------------------------------------------------------------------------

struct SpaceIndex {
    bool ok = false;
    std::shared_ptr<const PointSet> X;
    Semiring sr = Semiring::boolean();
    std::vector<FiniteFunction> fns;
    std::size_t n = 0;
    std::vector<std::uint64_t> above;               // above[i]: bits j with f_i <= f_j
    std::vector<std::vector<std::uint16_t>> supix;  // full-space index of pointwise sup
    std::vector<std::vector<std::uint16_t>> infix;  // full-space index of pointwise inf
    std::vector<std::vector<std::uint16_t>> act;    // act[s][i]: index of scalar action

    SpaceIndex(const Semiring& sr_in, std::size_t nx) : sr(sr_in) {
        X = PointSet::numbered(nx);
        std::uint64_t total = 1;
        const std::size_t k = sr.carrier_size();
        for (std::size_t i = 0; i < nx; ++i) {
            total *= k;
            if (total > 64) return;  // masks would not fit; caller skips
        }
        fns = enumerate_functions(X, sr, 64);
        n = fns.size();
        above.assign(n, 0);
        supix.assign(n, std::vector<std::uint16_t>(n, 0));
        infix.assign(n, std::vector<std::uint16_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (function_leq(fns[i], fns[j])) above[i] |= 1ull << j;
                supix[i][j] =
                    static_cast<std::uint16_t>(function_index(pointwise_sup(fns[i], fns[j])));
                infix[i][j] =
                    static_cast<std::uint16_t>(function_index(pointwise_inf(fns[i], fns[j])));
            }
        const auto scalars = sr.enumerate();
        act.assign(scalars.size(), std::vector<std::uint16_t>(n, 0));
        for (std::size_t s = 0; s < scalars.size(); ++s)
            for (std::size_t i = 0; i < n; ++i)
                act[s][i] = static_cast<std::uint16_t>(
                    function_index(scalar_times(scalars[s], fns[i])));
        ok = true;
    }

    bool scalar_closed(std::uint64_t m) const {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(m >> i & 1)) continue;
            for (const auto& row : act)
                if (!(m >> row[i] & 1)) return false;
        }
        return true;
    }

    // Least element of the subset above both i and j; npos when none.
    std::size_t join_in(std::uint64_t m, std::size_t i, std::size_t j) const {
        std::uint64_t ub = m & above[supix[i][j]];
        while (ub) {
            const std::size_t l = static_cast<std::size_t>(__builtin_ctzll(ub));
            if ((m & above[supix[i][j]] & ~above[l]) == 0) return l;
            ub &= ub - 1;
        }
        return Semimodule::npos;
    }

    bool usl(std::uint64_t m) const {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(m >> i & 1)) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!(m >> j & 1)) continue;
                if (join_in(m, i, j) == Semimodule::npos) return false;
            }
        }
        return true;
    }

    bool ifs(std::uint64_t m) const { return scalar_closed(m) && usl(m); }

    bool bsub(std::uint64_t m) const {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(m >> i & 1)) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!(m >> j & 1)) continue;
                if (!(m >> supix[i][j] & 1)) return false;
            }
        }
        return true;
    }

    bool inf_closed(std::uint64_t m) const {
        if (!(m & 1)) return false;  // zero function is enumeration index 0
        for (std::size_t i = 0; i < n; ++i) {
            if (!(m >> i & 1)) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!(m >> j & 1)) continue;
                if (!(m >> infix[i][j] & 1)) return false;
            }
        }
        return true;
    }

    Semimodule build(std::uint64_t m) const {
        std::vector<FiniteFunction> carrier;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1) carrier.push_back(fns[i]);
        return Semimodule::from_carrier(X, sr, std::move(carrier));
    }
};

// Memoized SpaceIndex per point count for one semiring.
struct SpaceMemo {
    Semiring sr;
    std::map<std::size_t, SpaceIndex> by_points;

    explicit SpaceMemo(const Semiring& s) : sr(s) {}
    const SpaceIndex& get(std::size_t nx) {
        auto it = by_points.find(nx);
        if (it == by_points.end())
            it = by_points.emplace(nx, SpaceIndex(sr, nx)).first;
        return it->second;
    }
};

// Visits zero-anchored subsets of K(X) in the canonical search order:
// carrier size ascending (outer), |X| ascending (inner), then combinations
// of nonzero function indices in lexicographic order.  The visitor returns
// false to stop; visit() returns false when the budget ran out.
template <typename F>
bool for_each_subset(SpaceMemo& memo, std::size_t min_points, std::size_t max_points,
                     std::size_t max_size, std::uint64_t budget, F&& visit) {
    std::uint64_t used = 0;
    for (std::size_t size = 1; size <= max_size; ++size) {
        for (std::size_t nx = min_points; nx <= max_points; ++nx) {
            const SpaceIndex& si = memo.get(nx);
            if (!si.ok || size > si.n) continue;
            const std::size_t k = size - 1;  // nonzero indices to choose
            std::vector<std::size_t> combo(k);
            for (std::size_t i = 0; i < k; ++i) combo[i] = i + 1;
            while (true) {
                if (used++ >= budget) return false;
                std::uint64_t mask = 1;
                for (std::size_t i : combo) mask |= 1ull << i;
                if (!visit(si, mask)) return true;
                // next combination over {1 .. si.n-1}: position pos may rise
                // to (si.n - 1) - (k - 1 - pos) = si.n - k + pos.
                if (k == 0) break;
                bool advanced = false;
                for (std::size_t pos = k; pos-- > 0;) {
                    if (combo[pos] < si.n - k + pos) {
                        ++combo[pos];
                        for (std::size_t i = pos + 1; i < k; ++i)
                            combo[i] = combo[i - 1] + 1;
                        advanced = true;
                        break;
                    }
                }
                if (!advanced) break;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Enumerated W universes
// ---------------------------------------------------------------------------

// Every finite nonempty IFS is b-complete (zero by scalar closure, internal
// joins by the semilattice property), so "b-complete semimodule W" admits
// any enumerated IFS; thm1 additionally restricts to admissible targets.
enum class WKind { Any, Admissible };

struct WUniverse {
    std::vector<Semimodule> spaces;
    bool complete = true;  // false when the enumeration budget ran out
};

constexpr std::size_t kUniverseCap = 4096;

WUniverse build_w_universe(WKind kind, SpaceMemo& memo, const TrialConfig& cfg) {
    WUniverse u;
    u.complete = for_each_subset(
        memo, cfg.min_points, cfg.max_points, cfg.w_carrier_cap, cfg.subset_budget,
        [&](const SpaceIndex& si, std::uint64_t mask) {
            if (!si.ifs(mask)) return true;
            Semimodule W = si.build(mask);
            if (kind == WKind::Admissible && !W.is_admissible()) return true;
            u.spaces.push_back(std::move(W));
            return u.spaces.size() < kUniverseCap;
        });
    return u;
}

// ---------------------------------------------------------------------------
// Instance evaluation (pure functions of the serialized instance)
// ---------------------------------------------------------------------------

struct ParsedInstance {
    SemimodulePtr V;
    std::vector<SemimodulePtr> targets;   // prop2
    std::vector<OperatorPair> pairs_out;  // A : V -> W
    std::vector<OperatorPair> pairs_in;   // A : W -> V
};

ParsedInstance parse_instance(const json& inst) {
    if (!inst.is_object()) throw ParseError("instance: expected an object");
    ParsedInstance p;
    p.V = semimodule_from_json(inst.at("V"), "instance.V");
    if (auto it = inst.find("targets"); it != inst.end()) {
        if (!it->is_array()) throw ParseError("instance.targets: expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            auto W = semimodule_from_json((*it)[i], "instance.targets");
            if (W->semiring() != p.V->semiring())
                throw ParseError("instance.targets: semiring mismatch");
            p.targets.push_back(std::move(W));
        }
    }
    if (auto it = inst.find("pairs_out"); it != inst.end())
        p.pairs_out = pairs_from_json(*it, p.V, true, "instance.pairs_out");
    if (auto it = inst.find("pairs_in"); it != inst.end())
        p.pairs_in = pairs_from_json(*it, p.V, false, "instance.pairs_in");
    return p;
}

EvalOutcome eval_prop1(const ParsedInstance& p) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    const bool lhs = V->is_b_subsemimodule();
    bool rhs = true;
    std::size_t bad_x = 0;
    for (std::size_t x = 0; x < V->domain()->size(); ++x)
        if (!is_b_linear(delta_functional(V, x))) {
            rhs = false;
            bad_x = x;
            break;
        }
    if (lhs == rhs) return EvalOutcome::pass();
    std::ostringstream os;
    os << "V=" << carrier_brief(*V) << ": b-subsemimodule=" << lhs
       << " but all-deltas-b-linear=" << rhs;
    if (!rhs) os << " (delta at " << V->domain()->labels[bad_x] << " fails)";
    return EvalOutcome::fail(os.str());
}

EvalOutcome eval_prop2(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    const bool lhs = V->is_b_subsemimodule();

    std::vector<SemimodulePtr> targets{scalar_space(V->semiring())};
    targets.insert(targets.end(), p.targets.begin(), p.targets.end());

    bool all_b_linear = true;
    std::string failure;
    for (const auto& W : targets) {
        std::vector<KernelMatrix> kernels;
        try {
            kernels = enumerate_kernels(V->domain(), *W, cfg.enumeration_cap);
        } catch (const CapExceeded&) {
            continue;  // this target is too large to enumerate; others decide
        }
        for (const auto& k : kernels) {
            OperatorTable op;
            try {
                op = operator_from_kernel(k, V, W);
            } catch (const EscapeError&) {
                continue;  // not an operator into W
            }
            if (!is_b_linear(op)) {
                all_b_linear = false;
                failure = "kernel into " + carrier_brief(*W) +
                          " induces a non-b-linear operator";
                break;
            }
        }
        if (!all_b_linear) break;
    }
    if (lhs == all_b_linear) return EvalOutcome::pass();
    std::ostringstream os;
    os << "V=" << carrier_brief(*V) << ": b-subsemimodule=" << lhs
       << " but every-integral-operator-b-linear=" << all_b_linear;
    if (!failure.empty()) os << " (" << failure << ")";
    return EvalOutcome::fail(os.str());
}

EvalOutcome eval_thm1(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs() || !V->is_inf_closed() ||
        !V->is_admissible())
        return EvalOutcome::skip("V is not an admissible functional wedge-semimodule");
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < p.pairs_out.size(); ++i) {
        const auto& [W, A] = p.pairs_out[i];
        if (!W->materialized() || !W->is_ifs() || !W->is_admissible())
            continue;  // pair target out of scope
        if (!is_b_linear(A))
            return EvalOutcome::fail("generator produced a non-b-linear operator (pair " +
                                     std::to_string(i) + ")");
        ++evaluated;
        std::optional<KernelMatrix> rep;
        try {
            rep = integral_representation(A, cfg.enumeration_cap);
        } catch (const CapExceeded&) {
            continue;
        }
        if (!rep)
            return EvalOutcome::fail(
                "b-linear operator from V=" + carrier_brief(*V) + " into W=" +
                carrier_brief(*W) + " has no integral representation (pair " +
                std::to_string(i) + ")");
        if (W->is_b_subsemimodule()) {
            for (std::size_t vi = 0; vi < V->size(); ++vi)
                if (apply_kernel_pointwise(*rep, V->element(vi)) != A.table[vi])
                    return EvalOutcome::fail(
                        "pointwise matrix form disagrees with the integral form on a "
                        "b-subsemimodule target (pair " +
                        std::to_string(i) + ")");
        }
    }
    if (evaluated == 0) return EvalOutcome::skip("no admissible target pairs");
    return EvalOutcome::pass();
}

// Shared by thm2/thm3: whether every enumerated b-linear functional on V has
// an integral representation (nullopt when enumeration exceeded its cap).
std::optional<bool> functionals_all_integral(const SemimodulePtr& V,
                                             const TrialConfig& cfg) {
    std::vector<OperatorTable> phis;
    try {
        phis = enumerate_b_linear_functionals(V, cfg.enumeration_cap);
    } catch (const CapExceeded&) {
        return std::nullopt;
    }
    for (const auto& phi : phis)
        if (!has_integral_representation(phi, cfg.enumeration_cap)) return false;
    return true;
}

EvalOutcome eval_thm2(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_b_subsemimodule())
        return EvalOutcome::skip("V is not a b-subsemimodule");
    const auto all_integral = functionals_all_integral(V, cfg);
    if (!all_integral) return EvalOutcome::skip("functional enumeration exceeded cap");
    if (!*all_integral)
        return EvalOutcome::skip("hypothesis fails: some b-linear functional is not integral");

    auto check_pair = [&](const SemimodulePtr& W, const OperatorTable& A,
                          const std::string& label) -> std::optional<EvalOutcome> {
        if (!W->materialized() || !W->is_ifs()) return std::nullopt;
        if (!is_b_linear(A))
            return EvalOutcome::fail("generator produced a non-b-linear operator (" +
                                     label + ")");
        bool integral;
        bool nuclear;
        try {
            integral = has_integral_representation(A, cfg.enumeration_cap);
            nuclear = decide_b_nuclear(A, cfg.enumeration_cap).b_nuclear;
        } catch (const CapExceeded&) {
            return std::nullopt;
        }
        if (integral == nuclear) return std::nullopt;
        std::ostringstream os;
        os << "on V=" << carrier_brief(*V) << " (" << label << " into "
           << carrier_brief(*W) << "): integral=" << integral << " but b-nuclear="
           << nuclear;
        return EvalOutcome::fail(os.str());
    };

    if (auto r = check_pair(V, identity_table(V), "id")) return *r;
    for (std::size_t i = 0; i < p.pairs_out.size(); ++i)
        if (auto r = check_pair(p.pairs_out[i].W, p.pairs_out[i].A,
                                "pair " + std::to_string(i)))
            return *r;
    return EvalOutcome::pass();
}

EvalOutcome eval_prop3(const ParsedInstance& p, const TrialConfig& cfg,
                       bool with_maps_into_v) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    bool s1;
    try {
        s1 = decide_id_b_nuclear(V, cfg.enumeration_cap).b_nuclear;
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("functional enumeration exceeded cap");
    }
    // The identity belongs to both quantified families, so when s1 is false
    // statements (2) and (3) are false with it and the equivalence holds;
    // the substantive direction is s1 => every sampled map is b-nuclear.
    if (!s1) return EvalOutcome::pass();

    auto check = [&](const OperatorPair& pr, const char* dir,
                     std::size_t i) -> std::optional<EvalOutcome> {
        if (!pr.W->materialized() || !pr.W->is_ifs()) return std::nullopt;
        if (!is_b_linear(pr.A))
            return EvalOutcome::fail(std::string("generator produced a non-b-linear ") +
                                     dir + " operator " + std::to_string(i));
        bool nuclear;
        try {
            nuclear = decide_b_nuclear(pr.A, cfg.enumeration_cap).b_nuclear;
        } catch (const CapExceeded&) {
            return std::nullopt;
        }
        if (nuclear) return std::nullopt;
        std::ostringstream os;
        os << "id on V=" << carrier_brief(*V) << " is b-nuclear but the sampled " << dir
           << " operator " << i << " (W=" << carrier_brief(*pr.W) << ") is not";
        return EvalOutcome::fail(os.str());
    };

    for (std::size_t i = 0; i < p.pairs_out.size(); ++i)
        if (auto r = check(p.pairs_out[i], "outgoing", i)) return *r;
    if (with_maps_into_v)
        for (std::size_t i = 0; i < p.pairs_in.size(); ++i)
            if (auto r = check(p.pairs_in[i], "incoming", i)) return *r;
    return EvalOutcome::pass();
}

// Kernel-theorem sample for V: the identity plus every in-scope serialized
// pair has an integral representation.  Returns nullopt on cap-skip.
std::optional<bool> kernel_theorem_sample(const ParsedInstance& p, const TrialConfig& cfg,
                                          std::string* failure) {
    const auto& V = p.V;
    try {
        if (!has_integral_representation(identity_table(V), cfg.enumeration_cap)) {
            if (failure) *failure = "the identity has no integral representation";
            return false;
        }
        for (std::size_t i = 0; i < p.pairs_out.size(); ++i) {
            const auto& [W, A] = p.pairs_out[i];
            if (!W->materialized() || !W->is_ifs()) continue;
            if (!is_b_linear(A)) {
                if (failure)
                    *failure = "generator produced a non-b-linear operator (pair " +
                               std::to_string(i) + ")";
                return false;
            }
            if (!has_integral_representation(A, cfg.enumeration_cap)) {
                if (failure)
                    *failure = "sampled b-linear operator " + std::to_string(i) +
                               " into W=" + carrier_brief(*W) +
                               " has no integral representation";
                return false;
            }
        }
    } catch (const CapExceeded&) {
        return std::nullopt;
    }
    return true;
}

EvalOutcome eval_thm3(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_b_subsemimodule())
        return EvalOutcome::skip("V is not a b-subsemimodule");
    const auto all_integral = functionals_all_integral(V, cfg);
    if (!all_integral) return EvalOutcome::skip("functional enumeration exceeded cap");
    std::string failure;
    auto kt = kernel_theorem_sample(p, cfg, &failure);
    if (!kt) return EvalOutcome::skip("kernel enumeration exceeded cap");
    bool nuclear;
    try {
        nuclear = decide_id_b_nuclear(V, cfg.enumeration_cap).b_nuclear;
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("functional enumeration exceeded cap");
    }
    const bool lhs = *kt && *all_integral;
    const bool rhs = *all_integral && nuclear;
    if (lhs == rhs) return EvalOutcome::pass();
    std::ostringstream os;
    os << "V=" << carrier_brief(*V) << ": kernel-theorem-sample=" << lhs
       << " (functionals-integral=" << *all_integral << ", id-b-nuclear=" << nuclear
       << ")";
    if (!failure.empty()) os << " [" << failure << "]";
    return EvalOutcome::fail(os.str());
}

EvalOutcome eval_thm3a(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    bool id_integral;
    try {
        id_integral = has_integral_representation(identity_table(V), cfg.enumeration_cap);
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("kernel enumeration exceeded cap");
    }
    std::string failure;
    auto kt = kernel_theorem_sample(p, cfg, &failure);
    if (!kt) return EvalOutcome::skip("kernel enumeration exceeded cap");
    if (*kt == id_integral) return EvalOutcome::pass();
    std::ostringstream os;
    os << "V=" << carrier_brief(*V) << ": id-integral=" << id_integral
       << " but kernel-theorem-sample=" << *kt;
    if (!failure.empty()) os << " [" << failure << "]";
    return EvalOutcome::fail(os.str());
}

EvalOutcome eval_prop4(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    try {
        const bool nuclear = decide_id_b_nuclear(V, cfg.enumeration_cap).b_nuclear;
        IDeltaReport rep = i_delta(V, cfg.enumeration_cap);
        const bool id_on_image_integral =
            has_integral_representation(identity_table(rep.image), cfg.enumeration_cap);
        const bool rhs = rep.embedding && id_on_image_integral;
        if (nuclear == rhs) return EvalOutcome::pass();
        std::ostringstream os;
        os << "V=" << carrier_brief(*V) << ": id-b-nuclear=" << nuclear
           << " but (i_Delta embedding=" << rep.embedding
           << " and Id-integral=" << id_on_image_integral << ")";
        return EvalOutcome::fail(os.str());
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("enumeration exceeded cap");
    }
}

EvalOutcome eval_thm4(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_ifs()) return EvalOutcome::skip("V is not an IFS");
    try {
        if (!decide_id_b_nuclear(V, cfg.enumeration_cap).b_nuclear)
            return EvalOutcome::pass();  // constructive direction only
        IDeltaReport rep = i_delta(V, cfg.enumeration_cap);
        if (!rep.embedding)
            return EvalOutcome::fail("id is b-nuclear on V=" + carrier_brief(*V) +
                                     " but i_Delta is not an embedding");
        // The image is the witness IFS; the kernel theorem holds there iff
        // its identity is integral.
        if (!has_integral_representation(identity_table(rep.image), cfg.enumeration_cap))
            return EvalOutcome::fail(
                "id is b-nuclear on V=" + carrier_brief(*V) +
                " but the kernel theorem fails in i_Delta(V) (Id not integral)");
        return EvalOutcome::pass();
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("enumeration exceeded cap");
    }
}

EvalOutcome eval_prop5(const ParsedInstance& p, const TrialConfig& cfg) {
    const auto& V = p.V;
    if (!V->materialized() || !V->is_b_subsemimodule())
        return EvalOutcome::skip("V is not a b-subsemimodule");
    try {
        if (!has_integral_representation(identity_table(V), cfg.enumeration_cap))
            return EvalOutcome::skip("the kernel theorem does not hold in V");
        IDeltaReport rep = i_delta(V, cfg.enumeration_cap);

        // i(x) = delta_x must land in Delta(V).
        const std::size_t nx = V->domain()->size();
        std::vector<std::size_t> delta_point(nx, PointSet::npos);
        for (std::size_t x = 0; x < nx; ++x) {
            const OperatorTable dx = delta_functional(V, x);
            for (std::size_t j = 0; j < rep.deltas.size(); ++j)
                if (rep.deltas[j].phi.table == dx.table) {
                    delta_point[x] = j;
                    break;
                }
            if (delta_point[x] == PointSet::npos)
                return EvalOutcome::fail("delta at " + V->domain()->labels[x] +
                                         " is not a delta-functional on V=" +
                                         carrier_brief(*V));
        }
        if (!rep.embedding)
            return EvalOutcome::fail("i_Delta is not an embedding on V=" +
                                     carrier_brief(*V));
        // i_* pulls an image element g back to x -> g(i(x)); on i_Delta(V)
        // this must invert i_Delta, making the image isomorphic to V.
        for (std::size_t vi = 0; vi < V->size(); ++vi) {
            const FiniteFunction& g = rep.map.table[vi];
            FiniteFunction back = zero_function(V->domain(), V->semiring());
            for (std::size_t x = 0; x < nx; ++x) back.set(x, g.at(delta_point[x]));
            if (back != V->element(vi))
                return EvalOutcome::fail("i_* does not invert i_Delta at carrier index " +
                                         std::to_string(vi) + " on V=" +
                                         carrier_brief(*V));
        }
        return EvalOutcome::pass();
    } catch (const CapExceeded&) {
        return EvalOutcome::skip("enumeration exceeded cap");
    }
}

EvalOutcome evaluate_instance(CheckId id, const json& inst, const TrialConfig& cfg) {
    ParsedInstance p = parse_instance(inst);
    switch (id) {
        case CheckId::Prop1: return eval_prop1(p);
        case CheckId::Prop2: return eval_prop2(p, cfg);
        case CheckId::Thm1: return eval_thm1(p, cfg);
        case CheckId::Thm2: return eval_thm2(p, cfg);
        case CheckId::Prop3: return eval_prop3(p, cfg, true);
        case CheckId::Corollary: return eval_prop3(p, cfg, false);
        case CheckId::Thm3: return eval_thm3(p, cfg);
        case CheckId::Thm3a: return eval_thm3a(p, cfg);
        case CheckId::Prop4: return eval_prop4(p, cfg);
        case CheckId::Thm4: return eval_thm4(p, cfg);
        case CheckId::Prop5: return eval_prop5(p, cfg);
    }
    throw std::logic_error("unknown check id");
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

bool check_uses_pairs(CheckId id) {
    switch (id) {
        case CheckId::Thm1:
        case CheckId::Thm2:
        case CheckId::Prop3:
        case CheckId::Corollary:
        case CheckId::Thm3:
        case CheckId::Thm3a: return true;
        default: return false;
    }
}

WKind w_kind_for_check(CheckId id) {
    return id == CheckId::Thm1 ? WKind::Admissible : WKind::Any;
}

// V-side admission predicate for exhaustive streams (beyond the IFS mask).
bool v_filter(CheckId id, const Semimodule& V) {
    switch (id) {
        case CheckId::Prop1:
        case CheckId::Prop2:
        case CheckId::Thm3a:
        case CheckId::Prop3:
        case CheckId::Corollary:
        case CheckId::Prop4:
        case CheckId::Thm4: return true;
        case CheckId::Thm1: return V.is_inf_closed() && V.is_admissible();
        case CheckId::Thm2:
        case CheckId::Thm3:
        case CheckId::Prop5: return V.is_b_subsemimodule();
    }
    return false;
}

FiniteFunction random_function(const std::shared_ptr<const PointSet>& X, const Semiring& sr,
                               const std::vector<SemiringValue>& carrier,
                               std::mt19937_64& rng) {
    std::vector<SemiringValue> vals;
    vals.reserve(X->size());
    for (std::size_t i = 0; i < X->size(); ++i)
        vals.push_back(carrier[rng() % carrier.size()]);
    return {X, sr, std::move(vals)};
}

// A generated target space for sampled pair instances; the fallbacks keep
// the admissibility requirement satisfiable.
SemimodulePtr gen_target(const Semiring& sr, const TrialConfig& cfg, bool need_admissible,
                         std::mt19937_64& rng) {
    const auto scalars = sr.enumerate();
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::size_t ny =
            cfg.min_points + rng() % (cfg.max_points - cfg.min_points + 1);
        auto Y = PointSet::numbered(ny);
        std::vector<FiniteFunction> gens;
        const std::size_t count = 1 + rng() % 3;
        for (std::size_t i = 0; i < count; ++i)
            gens.push_back(random_function(Y, sr, scalars, rng));
        try {
            Semimodule W = Semimodule::close_under(Y, sr, gens, false, cfg.w_carrier_cap);
            if (need_admissible && !W.is_admissible()) continue;
            return std::make_shared<const Semimodule>(std::move(W));
        } catch (const CapExceeded&) {
            continue;
        }
    }
    // Full spaces are admissible and strict; fall back to the smallest one
    // that fits the carrier cap.
    for (std::size_t ny = cfg.max_points; ny >= cfg.min_points && ny > 0; --ny) {
        std::uint64_t total = 1;
        bool fits = true;
        for (std::size_t i = 0; i < ny; ++i) {
            total *= scalars.size();
            if (total > cfg.w_carrier_cap) {
                fits = false;
                break;
            }
        }
        if (fits)
            return std::make_shared<const Semimodule>(
                Semimodule::full(PointSet::numbered(ny), sr));
    }
    return scalar_space(sr);
}

json build_instance_json(CheckId id, const Semiring& sr, const SemimodulePtr& V,
                         const TrialConfig& cfg,
                         const std::function<OperatorPair(bool v_is_source)>& next_pair) {
    json inst;
    inst["semiring"] = semiring_to_json(sr);
    inst["V"] = semimodule_to_json(*V);
    if (id == CheckId::Prop2 && !cfg.exhaustive) {
        json targets = json::array();
        for (int i = 0; i < 2; ++i) {
            OperatorPair pr = next_pair(true);
            targets.push_back(semimodule_to_json(*pr.W));
        }
        inst["targets"] = std::move(targets);
    }
    if (check_uses_pairs(id)) {
        json out = json::array();
        for (std::size_t i = 0; i < cfg.operators_per_instance; ++i)
            out.push_back(pair_to_json(next_pair(true)));
        inst["pairs_out"] = std::move(out);
        if (id == CheckId::Prop3) {
            json in = json::array();
            for (std::size_t i = 0; i < cfg.operators_per_instance; ++i)
                in.push_back(pair_to_json(next_pair(false)));
            inst["pairs_in"] = std::move(in);
        }
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Report plumbing
// ---------------------------------------------------------------------------

struct Sink {
    CheckId id;
    const TrialConfig* cfg;
    CheckReport* rep;
    std::uint64_t index = 0;

    void emit_line(json line) {
        if (rep->lines.size() < cfg->max_lines)
            rep->lines.push_back(std::move(line));
        else
            ++rep->suppressed_lines;
    }

    void skip(const std::string& reason) {
        ++rep->skipped;
        emit_line({{"check", check_name(id)},
                   {"index", index++},
                   {"verdict", "skip"},
                   {"detail", reason}});
    }

    void instance(const json& inst) {
        EvalOutcome o = evaluate_instance(id, inst, *cfg);
        json line{{"check", check_name(id)}, {"index", index++}};
        switch (o.status) {
            case EvalOutcome::Status::Skip:
                ++rep->skipped;
                line["verdict"] = "skip";
                line["detail"] = o.detail;
                break;
            case EvalOutcome::Status::Pass:
                ++rep->instances;
                line["verdict"] = "pass";
                break;
            case EvalOutcome::Status::Fail:
                ++rep->instances;
                line["verdict"] = "fail";
                line["detail"] = o.detail;
                line["instance"] = inst;
                rep->violations.push_back(
                    {o.detail,
                     json{{"kind", "violation"},
                          {"check", check_name(id)},
                          {"instance", inst},
                          {"detail", o.detail}}});
                break;
        }
        emit_line(std::move(line));
    }
};

void sampled_stream(CheckId id, const Semiring& sr, const TrialConfig& cfg, Sink& sink) {
    const auto scalars = sr.enumerate();
    const std::string tag = "inst/" + check_name(id) + "/" + sr.name();
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        std::mt19937_64 rng(sub_seed(cfg.seed, tag, i));
        const std::size_t nx =
            cfg.min_points + rng() % (cfg.max_points - cfg.min_points + 1);
        auto X = PointSet::numbered(nx);
        SemimodulePtr V;
        // thm1 needs an admissible inf-closed source; retry a few closures
        // before letting the evaluator record the skip.
        const int v_attempts = id == CheckId::Thm1 ? 8 : 1;
        for (int attempt = 0; attempt < v_attempts; ++attempt) {
            std::vector<FiniteFunction> gens;
            const std::size_t count = 1 + rng() % 3;
            for (std::size_t g = 0; g < count; ++g)
                gens.push_back(random_function(X, sr, scalars, rng));
            try {
                auto cand = std::make_shared<const Semimodule>(Semimodule::close_under(
                    X, sr, gens, /*inf_close=*/id == CheckId::Thm1, cfg.carrier_cap));
                V = std::move(cand);
                if (id != CheckId::Thm1 || V->is_admissible()) break;
            } catch (const CapExceeded&) {
            }
        }
        if (!V) {
            sink.skip("carrier cap exceeded while closing generators");
            continue;
        }
        auto next_pair = [&](bool v_is_source) -> OperatorPair {
            SemimodulePtr W =
                gen_target(sr, cfg, w_kind_for_check(id) == WKind::Admissible, rng);
            OperatorTable A = v_is_source ? gen_b_linear_operator(V, W, rng())
                                          : gen_b_linear_operator(W, V, rng());
            return {std::move(W), std::move(A)};
        };
        sink.instance(build_instance_json(id, sr, V, cfg, next_pair));
    }
}

void exhaustive_stream(CheckId id, const Semiring& sr, const TrialConfig& cfg, Sink& sink) {
    SpaceMemo memo(sr);
    std::optional<WUniverse> universe;
    if (check_uses_pairs(id)) {
        SpaceMemo umemo(sr);
        universe = build_w_universe(w_kind_for_check(id), umemo, cfg);
    }
    std::uint64_t op_counter = 0;
    const std::string optag = "xop/" + check_name(id) + "/" + sr.name();

    const bool finished = for_each_subset(
        memo, cfg.min_points, cfg.max_points, cfg.carrier_cap, cfg.subset_budget,
        [&](const SpaceIndex& si, std::uint64_t mask) {
            if (!si.ifs(mask)) return true;
            auto V = std::make_shared<const Semimodule>(si.build(mask));
            if (!v_filter(id, *V)) return true;
            auto next_pair = [&](bool v_is_source) -> OperatorPair {
                SemimodulePtr W;
                if (universe && !universe->spaces.empty()) {
                    const auto& picked =
                        universe->spaces[op_counter % universe->spaces.size()];
                    W = std::make_shared<const Semimodule>(picked);
                } else {
                    W = scalar_space(sr);
                }
                const std::uint64_t s = sub_seed(cfg.seed, optag, op_counter++);
                OperatorTable A = v_is_source ? gen_b_linear_operator(V, W, s)
                                              : gen_b_linear_operator(W, V, s);
                return {std::move(W), std::move(A)};
            };
            sink.instance(build_instance_json(id, sr, V, cfg, next_pair));
            return true;
        });
    if (!finished) sink.skip("subset enumeration budget exhausted");
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

const std::vector<CheckId>& all_checks() {
    static const std::vector<CheckId> ids = {
        CheckId::Prop1, CheckId::Prop2, CheckId::Thm1,  CheckId::Thm2,
        CheckId::Prop3, CheckId::Corollary, CheckId::Thm3, CheckId::Thm3a,
        CheckId::Prop4, CheckId::Thm4,  CheckId::Prop5};
    return ids;
}

std::string check_name(CheckId id) { return kCheckNames[static_cast<int>(id)]; }

std::optional<CheckId> check_from_name(const std::string& name) {
    for (CheckId id : all_checks())
        if (check_name(id) == name) return id;
    return std::nullopt;
}

void TrialConfig::validate() const {
    if (semirings.empty()) throw std::invalid_argument("config: no semirings");
    if (min_points < 1) throw std::invalid_argument("config: min_points must be >= 1");
    if (max_points < min_points)
        throw std::invalid_argument("config: max_points < min_points");
    if (carrier_cap < 1 || w_carrier_cap < 1)
        throw std::invalid_argument("config: carrier caps must be positive");
    if (subset_budget < 1 || enumeration_cap < 1)
        throw std::invalid_argument("config: budgets must be positive");
}

nlohmann::json trial_config_to_json(const TrialConfig& cfg) {
    json j;
    json srs = json::array();
    for (const auto& sr : cfg.semirings) srs.push_back(semiring_to_json(sr));
    j["semirings"] = std::move(srs);
    if (!cfg.checks.empty()) {
        json names = json::array();
        for (CheckId id : cfg.checks) names.push_back(check_name(id));
        j["checks"] = std::move(names);
    }
    j["min_points"] = cfg.min_points;
    j["max_points"] = cfg.max_points;
    j["carrier_cap"] = cfg.carrier_cap;
    j["w_carrier_cap"] = cfg.w_carrier_cap;
    j["instances"] = cfg.instances;
    j["operators_per_instance"] = cfg.operators_per_instance;
    j["exhaustive"] = cfg.exhaustive;
    j["seed"] = cfg.seed;
    j["subset_budget"] = cfg.subset_budget;
    j["enumeration_cap"] = cfg.enumeration_cap;
    j["max_lines"] = cfg.max_lines;
    return j;
}

TrialConfig trial_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("config: expected an object");
    TrialConfig cfg;
    auto get_size = [&](const char* key, std::size_t& out) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number_integer() && !it->is_number_unsigned())
                throw ParseError(std::string("config.") + key + ": expected an integer");
            const auto v = it->get<std::int64_t>();
            if (v < 0) throw ParseError(std::string("config.") + key + ": negative");
            out = static_cast<std::size_t>(v);
        }
    };
    auto get_u64 = [&](const char* key, std::uint64_t& out) {
        if (auto it = j.find(key); it != j.end()) {
            if (!it->is_number_integer() && !it->is_number_unsigned())
                throw ParseError(std::string("config.") + key + ": expected an integer");
            out = it->get<std::uint64_t>();
        }
    };
    if (auto it = j.find("semirings"); it != j.end()) {
        if (!it->is_array() || it->empty())
            throw ParseError("config.semirings: expected a nonempty array");
        cfg.semirings.clear();
        for (std::size_t i = 0; i < it->size(); ++i)
            cfg.semirings.push_back(semiring_from_json(
                (*it)[i], "config.semirings[" + std::to_string(i) + "]"));
    }
    if (auto it = j.find("checks"); it != j.end()) {
        if (!it->is_array()) throw ParseError("config.checks: expected an array");
        for (const auto& name : *it) {
            if (!name.is_string()) throw ParseError("config.checks: expected names");
            auto id = check_from_name(name.get<std::string>());
            if (!id)
                throw ParseError("config.checks: unknown check \"" +
                                 name.get<std::string>() + "\"");
            cfg.checks.push_back(*id);
        }
    }
    get_size("min_points", cfg.min_points);
    get_size("max_points", cfg.max_points);
    get_size("carrier_cap", cfg.carrier_cap);
    get_size("w_carrier_cap", cfg.w_carrier_cap);
    get_size("instances", cfg.instances);
    get_size("operators_per_instance", cfg.operators_per_instance);
    get_size("max_lines", cfg.max_lines);
    if (auto it = j.find("exhaustive"); it != j.end()) {
        if (!it->is_boolean()) throw ParseError("config.exhaustive: expected a boolean");
        cfg.exhaustive = it->get<bool>();
    }
    get_u64("seed", cfg.seed);
    get_u64("subset_budget", cfg.subset_budget);
    get_u64("enumeration_cap", cfg.enumeration_cap);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return cfg;
}

nlohmann::json CheckReport::summary_json() const {
    return json{{"check", check_name(check)},
                {"instances", instances},
                {"skipped", skipped},
                {"violations", violations.size()},
                {"suppressed_lines", suppressed_lines}};
}

CheckReport run_check(CheckId id, const TrialConfig& cfg) {
    cfg.validate();
    CheckReport rep;
    rep.check = id;
    const auto t0 = std::chrono::steady_clock::now();
    Sink sink{id, &cfg, &rep, 0};
    for (const Semiring& sr : cfg.semirings) {
        if (!sr.enumerable()) {
            sink.skip("semiring " + sr.name() + " is not enumerable");
            continue;
        }
        if (cfg.exhaustive)
            exhaustive_stream(id, sr, cfg, sink);
        else
            sampled_stream(id, sr, cfg, sink);
    }
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

std::vector<CheckReport> run_checks(const TrialConfig& cfg) {
    cfg.validate();
    const std::vector<CheckId>& ids = cfg.checks.empty() ? all_checks() : cfg.checks;
    std::vector<CheckReport> out;
    out.reserve(ids.size());
    for (CheckId id : ids) out.push_back(run_check(id, cfg));
    return out;
}

std::string report_to_json_lines(const std::vector<CheckReport>& reports,
                                 const TrialConfig& cfg) {
    std::string out;
    std::uint64_t total_violations = 0;
    for (const auto& rep : reports) {
        for (const auto& line : rep.lines) out += line.dump() + "\n";
        out += rep.summary_json().dump() + "\n";
        total_violations += rep.violations.size();
    }
    json tail{{"config", trial_config_to_json(cfg)},
              {"checks_run", reports.size()},
              {"total_violations", total_violations}};
    out += tail.dump() + "\n";
    return out;
}

std::optional<Violation> replay_witness(const nlohmann::json& witness,
                                        const TrialConfig& cfg) {
    if (!witness.is_object() || !witness.contains("kind"))
        throw ParseError("witness: expected an object with a \"kind\" field");
    const std::string kind = witness.at("kind").get<std::string>();
    if (kind == "violation") {
        const auto id = check_from_name(witness.at("check").get<std::string>());
        if (!id) throw ParseError("witness: unknown check");
        EvalOutcome o = evaluate_instance(*id, witness.at("instance"), cfg);
        if (o.status == EvalOutcome::Status::Fail) return Violation{o.detail, witness};
        return std::nullopt;
    }
    if (kind == "counterexample") {
        const std::string stmt = witness.at("statement").get<std::string>();
        const std::string dropped = witness.at("dropped").get<std::string>();
        const json& inst = witness.at("instance");
        SemimodulePtr V = semimodule_from_json(inst.at("V"), "witness.V");
        if (stmt == "prop2" && dropped == "b-subsemimodule") {
            if (!V->is_ifs() || V->is_b_subsemimodule()) return std::nullopt;
            auto S = scalar_space(V->semiring());
            OperatorTable A = operator_from_rows(V, S, inst.at("A"), "witness.A");
            // By construction the operator is integral (it came from a
            // kernel); the counterexample is its non-b-linearity.
            if (is_b_linear(A)) return std::nullopt;
            return Violation{witness.value("detail", std::string("reproduced")), witness};
        }
        if (stmt == "thm1" && (dropped == "inf-closure" || dropped == "admissibility")) {
            SemimodulePtr W = inst.contains("W")
                                  ? semimodule_from_json(inst.at("W"), "witness.W")
                                  : scalar_space(V->semiring());
            OperatorTable A = operator_from_rows(V, W, inst.at("A"), "witness.A");
            if (!is_b_linear(A)) return std::nullopt;
            if (has_integral_representation(A, cfg.enumeration_cap)) return std::nullopt;
            return Violation{witness.value("detail", std::string("reproduced")), witness};
        }
        if (stmt == "thm2" && dropped == "functional-integrality") {
            SemimodulePtr W = semimodule_from_json(inst.at("W"), "witness.W");
            OperatorTable A = operator_from_rows(V, W, inst.at("A"), "witness.A");
            if (!is_b_linear(A)) return std::nullopt;
            const bool integral = has_integral_representation(A, cfg.enumeration_cap);
            const bool nuclear = decide_b_nuclear(A, cfg.enumeration_cap).b_nuclear;
            if (integral == nuclear) return std::nullopt;
            return Violation{witness.value("detail", std::string("reproduced")), witness};
        }
        throw ParseError("witness: unsupported statement/hypothesis pair");
    }
    throw ParseError("witness: unknown kind \"" + kind + "\"");
}

Semimodule gen_semimodule(const Semiring& sr, std::shared_ptr<const PointSet> domain,
                          std::uint64_t seed, std::size_t carrier_cap, bool inf_close) {
    if (!sr.enumerable())
        throw std::invalid_argument("gen_semimodule requires an enumerable semiring");
    std::mt19937_64 rng(mix64(seed));
    const auto scalars = sr.enumerate();
    std::vector<FiniteFunction> gens;
    const std::size_t count = 1 + rng() % 3;
    for (std::size_t i = 0; i < count; ++i)
        gens.push_back(random_function(domain, sr, scalars, rng));
    return Semimodule::close_under(domain, sr, gens, inf_close, carrier_cap);
}

Semimodule gen_semimodule(const TrialConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::vector<Semiring> enumerable;
    for (const auto& sr : cfg.semirings)
        if (sr.enumerable()) enumerable.push_back(sr);
    if (enumerable.empty())
        throw std::invalid_argument("gen_semimodule: no enumerable semiring in config");
    std::mt19937_64 rng(mix64(seed));
    const Semiring sr = enumerable[rng() % enumerable.size()];
    const std::size_t nx = cfg.min_points + rng() % (cfg.max_points - cfg.min_points + 1);
    return gen_semimodule(sr, PointSet::numbered(nx), rng(), cfg.carrier_cap, false);
}

OperatorTable gen_b_linear_operator(const SemimodulePtr& V, const SemimodulePtr& W,
                                    std::uint64_t seed, int budget) {
    if (!V || !W || !V->materialized() || !W->materialized())
        throw std::invalid_argument("gen_b_linear_operator needs materialized spaces");
    if (V->semiring() != W->semiring())
        throw std::invalid_argument("gen_b_linear_operator: semiring mismatch");
    const Semiring& sr = V->semiring();
    std::mt19937_64 rng(mix64(seed));

    if (V->is_b_subsemimodule() && W->size() > 0) {
        for (int attempt = 0; attempt < budget; ++attempt) {
            std::vector<FiniteFunction> rows;
            rows.reserve(V->domain()->size());
            for (std::size_t x = 0; x < V->domain()->size(); ++x)
                rows.push_back(W->element(rng() % W->size()));
            KernelMatrix k = make_kernel(V->domain(), W->domain(), sr, std::move(rows));
            try {
                OperatorTable op = operator_from_kernel(k, V, W);
                if (is_b_linear(op)) return op;
            } catch (const EscapeError&) {
            }
        }
    } else if (V->is_upper_semilattice() && W->size() > 0) {
        // Random join-preserving extension from the join-irreducibles.
        const auto& irr = V->join_irreducibles();
        for (int attempt = 0; attempt < budget; ++attempt) {
            std::vector<FiniteFunction> images;
            images.reserve(irr.size());
            for (std::size_t i = 0; i < irr.size(); ++i)
                images.push_back(W->element(rng() % W->size()));
            std::vector<FiniteFunction> table;
            table.reserve(V->size());
            bool escaped = false;
            for (std::size_t vi = 0; vi < V->size() && !escaped; ++vi) {
                std::vector<FiniteFunction> terms;
                for (std::size_t t = 0; t < irr.size(); ++t)
                    if (function_leq(V->element(irr[t]), V->element(vi)))
                        terms.push_back(images[t]);
                try {
                    table.push_back(internal_sum(*W, terms));
                } catch (const EscapeError&) {
                    escaped = true;
                }
            }
            if (escaped) continue;
            try {
                OperatorTable op = make_operator(V, W, std::move(table));
                if (is_b_linear(op)) return op;
            } catch (const std::invalid_argument&) {
            }
        }
    }

    // Rank-1 fallback: phi(v) (.) w is b-linear for any b-linear functional.
    try {
        const auto phis = enumerate_b_linear_functionals(V, 4096);
        if (!phis.empty() && W->size() > 0) {
            for (int attempt = 0; attempt < budget; ++attempt) {
                NuclearDecomposition d;
                d.parts.push_back(
                    {phis[rng() % phis.size()], W->element(rng() % W->size())});
                try {
                    OperatorTable op = sum_rank_ones(d, V, W);
                    if (is_b_linear(op)) return op;
                } catch (const EscapeError&) {
                }
            }
        }
    } catch (const CapExceeded&) {
    }

    // Last resort: the zero operator.
    const FiniteFunction zw = zero_function(W->domain(), sr);
    if (!W->contains(zw))
        throw std::invalid_argument("gen_b_linear_operator: target lacks a zero element");
    return make_operator(V, W, std::vector<FiniteFunction>(V->size(), zw));
}

SearchResult counterexample_search(CheckId statement, const std::string& dropped_hypothesis,
                                   const TrialConfig& cfg) {
    cfg.validate();
    const bool p2 = statement == CheckId::Prop2 && dropped_hypothesis == "b-subsemimodule";
    const bool t1i = statement == CheckId::Thm1 && dropped_hypothesis == "inf-closure";
    const bool t1a = statement == CheckId::Thm1 && dropped_hypothesis == "admissibility";
    const bool t2 =
        statement == CheckId::Thm2 && dropped_hypothesis == "functional-integrality";
    if (!(p2 || t1i || t1a || t2))
        throw std::invalid_argument("unsupported statement/hypothesis pair: " +
                                    check_name(statement) + " / " + dropped_hypothesis);

    SearchResult res;
    auto make_witness = [&](const Semiring& sr, json inst, const std::string& detail) {
        res.found = true;
        res.detail = detail;
        inst["semiring"] = semiring_to_json(sr);
        res.witness = json{{"kind", "counterexample"},
                           {"statement", check_name(statement)},
                           {"dropped", dropped_hypothesis},
                           {"instance", std::move(inst)},
                           {"detail", detail}};
    };

    for (const Semiring& sr : cfg.semirings) {
        if (!sr.enumerable()) continue;
        SpaceMemo memo(sr);
        std::optional<WUniverse> nonadm;
        std::uint64_t opctr = 0;

        for_each_subset(
            memo, cfg.min_points, cfg.max_points, cfg.carrier_cap, cfg.subset_budget,
            [&](const SpaceIndex& si, std::uint64_t mask) {
                ++res.examined;
                if (!si.ifs(mask)) return true;

                if (p2) {
                    if (si.bsub(mask)) return true;
                    auto V = std::make_shared<const Semimodule>(si.build(mask));
                    auto S = scalar_space(sr);
                    std::vector<KernelMatrix> kernels;
                    try {
                        kernels = enumerate_kernels(V->domain(), *S, cfg.enumeration_cap);
                    } catch (const CapExceeded&) {
                        return true;
                    }
                    for (const auto& k : kernels) {
                        OperatorTable op = operator_from_kernel(k, V, S);
                        if (is_b_linear(op)) continue;
                        json inst;
                        inst["V"] = semimodule_to_json(*V);
                        json kv = json::array();
                        std::string kstr = "(";
                        for (std::size_t r = 0; r < k.rows.size(); ++r) {
                            kv.push_back(value_to_json(k.rows[r].at(0)));
                            if (r) kstr += ",";
                            kstr += sr.describe_value(k.rows[r].at(0));
                        }
                        kstr += ")";
                        inst["kernel"] = std::move(kv);
                        inst["A"] = operator_rows_json(op);
                        make_witness(sr, std::move(inst),
                                     "V=" + carrier_brief(*V) +
                                         " is an IFS but not a b-subsemimodule; the "
                                         "integral functional with kernel " + kstr +
                                         " is not b-linear");
                        return false;
                    }
                    return true;
                }

                if (t1i) {
                    auto V = std::make_shared<const Semimodule>(si.build(mask));
                    if (!V->is_admissible() || V->is_inf_closed()) return true;
                    std::vector<OperatorTable> phis;
                    try {
                        phis = enumerate_b_linear_functionals(V, cfg.enumeration_cap);
                    } catch (const CapExceeded&) {
                        return true;
                    }
                    for (const auto& phi : phis) {
                        if (has_integral_representation(phi, cfg.enumeration_cap))
                            continue;
                        json inst;
                        inst["V"] = semimodule_to_json(*V);
                        inst["A"] = operator_rows_json(phi);
                        make_witness(sr, std::move(inst),
                                     "V=" + carrier_brief(*V) +
                                         " (admissible IFS, not inf-closed) carries a "
                                         "b-linear functional without an integral "
                                         "representation");
                        return false;
                    }
                    return true;
                }

                if (t1a) {
                    auto V = std::make_shared<const Semimodule>(si.build(mask));
                    if (!V->is_inf_closed() || V->is_admissible()) return true;
                    // Functionals first (the scalar space is admissible), then
                    // generated operators into enumerated admissible targets.
                    std::vector<OperatorTable> phis;
                    try {
                        phis = enumerate_b_linear_functionals(V, cfg.enumeration_cap);
                    } catch (const CapExceeded&) {
                        return true;
                    }
                    for (const auto& phi : phis) {
                        if (has_integral_representation(phi, cfg.enumeration_cap))
                            continue;
                        json inst;
                        inst["V"] = semimodule_to_json(*V);
                        inst["A"] = operator_rows_json(phi);
                        make_witness(sr, std::move(inst),
                                     "V=" + carrier_brief(*V) +
                                         " (inf-closed IFS, not admissible) carries a "
                                         "b-linear functional without an integral "
                                         "representation");
                        return false;
                    }
                    if (!nonadm) {
                        SpaceMemo umemo(sr);
                        nonadm = build_w_universe(WKind::Admissible, umemo, cfg);
                    }
                    for (const auto& Wraw : nonadm->spaces) {
                        auto W = std::make_shared<const Semimodule>(Wraw);
                        for (std::size_t j = 0; j < cfg.operators_per_instance; ++j) {
                            OperatorTable A = gen_b_linear_operator(
                                V, W, sub_seed(cfg.seed, "search/t1a", opctr++));
                            if (has_integral_representation(A, cfg.enumeration_cap))
                                continue;
                            json inst;
                            inst["V"] = semimodule_to_json(*V);
                            inst["W"] = semimodule_to_json(*W);
                            inst["A"] = operator_rows_json(A);
                            make_witness(sr, std::move(inst),
                                         "from the non-admissible V=" +
                                             carrier_brief(*V) +
                                             " a b-linear operator into the admissible "
                                             "W=" + carrier_brief(*W) +
                                             " lacks an integral representation");
                            return false;
                        }
                    }
                    return true;
                }

                // t2: V b-sub whose functionals are NOT all integral; look for
                // a b-linear map where integrality and b-nuclearity disagree.
                if (!si.bsub(mask)) return true;
                auto V = std::make_shared<const Semimodule>(si.build(mask));
                std::vector<OperatorTable> phis;
                try {
                    phis = enumerate_b_linear_functionals(V, cfg.enumeration_cap);
                } catch (const CapExceeded&) {
                    return true;
                }
                std::optional<OperatorTable> nonintegral;
                for (const auto& phi : phis)
                    if (!has_integral_representation(phi, cfg.enumeration_cap)) {
                        nonintegral = phi;
                        break;
                    }
                if (!nonintegral) return true;  // hypothesis not actually dropped
                auto consider = [&](const SemimodulePtr& W,
                                    const OperatorTable& A) -> bool {
                    const bool integral =
                        has_integral_representation(A, cfg.enumeration_cap);
                    const bool nuclear =
                        decide_b_nuclear(A, cfg.enumeration_cap).b_nuclear;
                    if (integral == nuclear) return false;
                    json inst;
                    inst["V"] = semimodule_to_json(*V);
                    inst["W"] = semimodule_to_json(*W);
                    inst["A"] = operator_rows_json(A);
                    std::ostringstream os;
                    os << "on V=" << carrier_brief(*V)
                       << " (a b-subsemimodule with a non-integral functional) an "
                          "operator has integral=" << integral
                       << " but b-nuclear=" << nuclear;
                    make_witness(sr, std::move(inst), os.str());
                    return true;
                };
                if (consider(scalar_space(sr), *nonintegral)) return false;
                if (consider(V, identity_table(V))) return false;
                for (std::size_t j = 0; j < cfg.operators_per_instance; ++j) {
                    std::mt19937_64 rng(sub_seed(cfg.seed, "search/t2", opctr++));
                    SemimodulePtr W = gen_target(sr, cfg, false, rng);
                    OperatorTable A = gen_b_linear_operator(V, W, rng());
                    if (consider(W, A)) return false;
                }
                return true;
            });
        if (res.found) return res;
    }
    return res;
}

}  // namespace idemlin
