#include "idemlin/apps.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "idemlin/function.hpp"
#include "idemlin/operators.hpp"
#include "idemlin/semimodule.hpp"

namespace idemlin {

namespace {

// Classical relaxation with predecessor tracking, used only to extract a
// negative-cycle witness once the fixpoint iteration failed to stabilize.
[[noreturn]] void throw_negative_cycle(const WeightedGraph& g) {
    const std::size_t n = g.nodes.size();
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<bool> reach(n, false);
    std::vector<Rational> dist(n, Rational(0));
    std::vector<std::size_t> pred(n, kNone);
    reach[g.source] = true;
    std::size_t improved = kNone;
    for (std::size_t round = 0; round < n; ++round) {
        improved = kNone;
        for (const auto& e : g.edges) {
            if (!reach[e.from]) continue;
            Rational cand = dist[e.from] + e.weight;
            if (!reach[e.to] || cand < dist[e.to]) {
                reach[e.to] = true;
                dist[e.to] = cand;
                pred[e.to] = e.from;
                improved = e.to;
            }
        }
        if (improved == kNone) break;
    }
    if (improved == kNone)
        throw std::logic_error("negative-cycle extraction found no improving edge");
    // A node improved on the n-th round lies on or downstream of a cycle;
    // walking n predecessors is guaranteed to land inside it.
    std::size_t x = improved;
    for (std::size_t i = 0; i < n; ++i) {
        if (pred[x] == kNone)
            throw std::logic_error("negative-cycle predecessor chain broke");
        x = pred[x];
    }
    std::vector<std::size_t> back{x};
    for (std::size_t u = pred[x], steps = 0; ; u = pred[u], ++steps) {
        if (u == kNone || steps > n)
            throw std::logic_error("negative-cycle predecessor chain broke");
        back.push_back(u);
        if (u == x) break;
    }
    // Predecessor order is against the edges; reverse to report the cycle
    // in edge direction, first node repeated at the end.
    std::reverse(back.begin(), back.end());
    throw NegativeCycleError(std::move(back));
}

void validate_values(const Semiring& sr, const std::vector<SemiringValue>& vs,
                     const char* what) {
    for (const auto& v : vs)
        if (!sr.valid(v))
            throw std::invalid_argument(std::string(what) +
                                        " contains a value outside the semiring");
}

}  // namespace

std::size_t WeightedGraph::node_index(const std::string& label) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == label) return i;
    return PointSet::npos;
}

ShortestPathResult shortest_paths(const WeightedGraph& g) {
    const std::size_t n = g.nodes.size();
    if (n == 0) throw std::invalid_argument("graph has no nodes");
    if (g.source >= n) throw std::invalid_argument("source node index out of range");
    {
        std::set<std::string> labels(g.nodes.begin(), g.nodes.end());
        if (labels.size() != n) throw std::invalid_argument("duplicate node labels");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : g.edges) {
        if (e.from >= n || e.to >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (!seen.insert({e.from, e.to}).second)
            throw std::invalid_argument("duplicate edge " + g.nodes[e.from] + " -> " +
                                        g.nodes[e.to]);
    }

    const Semiring sr = Semiring::min_plus();
    auto X = PointSet::make(g.nodes);
    Semimodule W = Semimodule::full(X, sr);

    // Kernel row at u: v -> weight of the edge u -> v (zero = +inf if none),
    // so apply_integral computes one Bellman relaxation round exactly.
    std::vector<FiniteFunction> rows(n, zero_function(X, sr));
    for (const auto& e : g.edges) rows[e.from].set(e.to, sr.make(e.weight));
    KernelMatrix k = make_kernel(X, X, sr, std::move(rows));

    const FiniteFunction e_src = impulse(X, sr, g.source);
    FiniteFunction f = e_src;
    for (std::size_t t = 1; t <= n; ++t) {
        FiniteFunction next = pointwise_sup(apply_integral(k, f, W), e_src);
        if (next == f) return {f.values(), t};
        f = std::move(next);
    }
    // Still improving after |nodes| rounds: some reachable cycle is negative.
    throw_negative_cycle(g);
}

ViterbiResult viterbi(const HmmSpec& h) {
    const std::size_t S = h.states.size();
    const std::size_t T = h.observations.size();
    if (S == 0) throw std::invalid_argument("HMM needs at least one state");
    if (T == 0) throw std::invalid_argument("observation sequence must be nonempty");
    if (h.initial.size() != S || h.transition.size() != S || h.emission.size() != S)
        throw std::invalid_argument("HMM matrices must have one row per state");
    const std::size_t alphabet = h.emission.front().size();
    if (alphabet == 0) throw std::invalid_argument("emission alphabet is empty");

    const Semiring sr = Semiring::max_plus();
    validate_values(sr, h.initial, "initial vector");
    for (const auto& row : h.transition) {
        if (row.size() != S)
            throw std::invalid_argument("transition matrix must be square");
        validate_values(sr, row, "transition matrix");
    }
    for (const auto& row : h.emission) {
        if (row.size() != alphabet)
            throw std::invalid_argument("emission rows must have equal length");
        validate_values(sr, row, "emission matrix");
    }
    for (std::size_t o : h.observations)
        if (o >= alphabet)
            throw std::invalid_argument("observation symbol out of alphabet range");

    auto X = PointSet::make(h.states);
    Semimodule W = Semimodule::full(X, sr);

    FiniteFunction f = zero_function(X, sr);
    for (std::size_t s = 0; s < S; ++s)
        f.set(s, sr.otimes(h.initial[s], h.emission[s][h.observations[0]]));

    // back[t][s'] = the smallest previous state attaining the max at (t, s').
    std::vector<std::vector<std::size_t>> back(T, std::vector<std::size_t>(S, 0));
    for (std::size_t t = 1; t < T; ++t) {
        std::vector<FiniteFunction> rows(S, zero_function(X, sr));
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t s2 = 0; s2 < S; ++s2)
                rows[s].set(s2, sr.otimes(h.transition[s][s2],
                                          h.emission[s2][h.observations[t]]));
        KernelMatrix k = make_kernel(X, X, sr, std::move(rows));
        FiniteFunction next = apply_integral(k, f, W);
        for (std::size_t s2 = 0; s2 < S; ++s2) {
            if (next.at(s2).is_bottom()) continue;  // unreachable; pointer unused
            for (std::size_t s = 0; s < S; ++s) {
                if (sr.otimes(f.at(s), k.at(s, s2)) == next.at(s2)) {
                    back[t][s2] = s;
                    break;
                }
            }
        }
        f = std::move(next);
    }

    SemiringValue score = sr.sup(f.values());
    std::vector<std::size_t> path(T, 0);
    for (std::size_t s = 0; s < S; ++s)
        if (f.at(s) == score) {
            path[T - 1] = s;
            break;
        }
    for (std::size_t t = T - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
    return {std::move(path), score};
}

std::vector<SemiringValue> tropical_convolution(const Semiring& sr,
                                                const std::vector<SemiringValue>& p,
                                                const std::vector<SemiringValue>& q) {
    if (p.empty() || q.empty())
        throw std::invalid_argument("coefficient lists must be nonempty");
    validate_values(sr, p, "first coefficient list");
    validate_values(sr, q, "second coefficient list");

    const std::size_t np = p.size(), nq = q.size(), nr = np + nq - 1;
    auto Xq = PointSet::numbered(nq);
    auto Xr = PointSet::numbered(nr);
    Semimodule W = Semimodule::full(Xr, sr);

    // k(i) = (n -> p(n - i)): convolution as an integral operator on q.
    std::vector<FiniteFunction> rows(nq, zero_function(Xr, sr));
    for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = 0; j < np; ++j) rows[i].set(i + j, p[j]);
    KernelMatrix k = make_kernel(Xq, Xr, sr, std::move(rows));

    return apply_integral(k, FiniteFunction(Xq, sr, q), W).values();
}

}  // namespace idemlin
