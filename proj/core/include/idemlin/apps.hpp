#pragma once

// Semiring-parametric applications built on the integral-operator machinery:
// single-source shortest paths (min-plus), Viterbi decoding (max-plus
// log-weights), and tropical convolution.  All three evaluate operators
// through apply_integral, so they exercise the kernel path end-to-end.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "idemlin/rational.hpp"
#include "idemlin/semiring.hpp"

namespace idemlin {

struct WeightedGraph {
    struct Edge {
        std::size_t from = 0;
        std::size_t to = 0;
        Rational weight;
    };

    std::vector<std::string> nodes;
    std::vector<Edge> edges;
    std::size_t source = 0;

    std::size_t node_index(const std::string& label) const;
};

// Thrown when a negative-total-weight cycle is reachable from the source.
// `cycle` lists node indices along one witnessing cycle (first == last).
class NegativeCycleError : public std::runtime_error {
public:
    explicit NegativeCycleError(std::vector<std::size_t> cycle_nodes)
        : std::runtime_error("negative cycle reachable from source"),
          cycle(std::move(cycle_nodes)) {}

    std::vector<std::size_t> cycle;
};

struct ShortestPathResult {
    // Min-plus values per node: Finite(distance) or Bottom (unreachable).
    std::vector<SemiringValue> dist;
    std::size_t iterations = 0;  // fixpoint iterations used (<= |nodes|)
};

// Exact single-source shortest distances as the Bellman fixpoint of the
// min-plus integral operator defined by the edge-weight kernel:
// iterate f -> (A f) + e_source until stable.  Throws NegativeCycleError
// with a cycle witness; throws std::invalid_argument on malformed input
// (duplicate edges, out-of-range endpoints).
ShortestPathResult shortest_paths(const WeightedGraph& g);

struct HmmSpec {
    std::vector<std::string> states;
    // Max-plus log-weights, exact rationals (Bottom = impossible).
    std::vector<SemiringValue> initial;                    // [state]
    std::vector<std::vector<SemiringValue>> transition;    // [from][to]
    std::vector<std::vector<SemiringValue>> emission;      // [state][symbol]
    std::vector<std::size_t> observations;                 // symbol indices
};

struct ViterbiResult {
    std::vector<std::size_t> path;  // one state index per observation
    SemiringValue score;            // max-plus total (Bottom if impossible)
};

// Most probable state path by max-plus matrix-chain evaluation; each step's
// vector is computed by apply_integral against the step kernel, and argmax
// backpointers resolve ties toward the smallest state index.  Throws
// std::invalid_argument on dimension mismatches / empty observations.
ViterbiResult viterbi(const HmmSpec& h);

// Tropical convolution (p (*) q)(n) = sum_{i+j=n} p(i) (x) q(j) over the
// given semiring (intended for max-plus / min-plus); implemented as an
// integral operator with kernel k(i) = (n -> p(n - i)) applied to q.
// Lists must be nonempty; the result has |p| + |q| - 1 coefficients.
std::vector<SemiringValue> tropical_convolution(const Semiring& sr,
                                                const std::vector<SemiringValue>& p,
                                                const std::vector<SemiringValue>& q);

}  // namespace idemlin
