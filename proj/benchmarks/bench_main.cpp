// Microbenchmarks for the hot paths: scalar arithmetic, integral-operator
// application, maximal-kernel extraction, carrier closure, and functional
// enumeration.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "idemlin/nuclear.hpp"
#include "idemlin/operators.hpp"

using namespace idemlin;

namespace {

std::vector<SemiringValue> random_tropical_values(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SemiringValue> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng() % 5 == 0) {
            out.push_back(SemiringValue::bottom());
        } else {
            out.push_back(SemiringValue::finite(
                Rational(static_cast<std::int64_t>(rng() % 25) - 12,
                         1 + static_cast<std::int64_t>(rng() % 4))));
        }
    }
    return out;
}

void BM_Oplus(benchmark::State& state) {
    const Semiring mp = Semiring::max_plus();
    const auto values = random_tropical_values(1024, 1);
    std::size_t i = 0;
    for (auto _ : state) {
        const SemiringValue& a = values[i % values.size()];
        const SemiringValue& b = values[(i + 7) % values.size()];
        benchmark::DoNotOptimize(mp.oplus(a, b));
        ++i;
    }
}
BENCHMARK(BM_Oplus);

void BM_ApplyIntegral6x6(benchmark::State& state) {
    const Semiring mp = Semiring::max_plus();
    auto X = PointSet::numbered(6);
    auto W = std::make_shared<const Semimodule>(Semimodule::full(X, mp));
    const auto entries = random_tropical_values(36, 2);
    std::vector<std::vector<SemiringValue>> rows(6);
    for (std::size_t x = 0; x < 6; ++x)
        rows[x].assign(entries.begin() + 6 * x, entries.begin() + 6 * (x + 1));
    const KernelMatrix k = make_kernel(X, X, mp, rows);
    const FiniteFunction f(X, mp, random_tropical_values(6, 3));
    for (auto _ : state) benchmark::DoNotOptimize(apply_integral(k, f, *W));
}
BENCHMARK(BM_ApplyIntegral6x6);

void BM_MaxKernelExtract(benchmark::State& state) {
    const Semiring b = Semiring::boolean();
    auto X = PointSet::numbered(3);
    auto F = std::make_shared<const Semimodule>(Semimodule::full(X, b));
    const KernelMatrix k = make_kernel(
        X, X, b,
        {{b.one(), b.zero(), b.one()},
         {b.zero(), b.one(), b.zero()},
         {b.one(), b.one(), b.zero()}});
    const OperatorTable A = operator_from_kernel(k, F, F);
    for (auto _ : state) benchmark::DoNotOptimize(max_kernel(A));
}
BENCHMARK(BM_MaxKernelExtract);

void BM_CloseUnder(benchmark::State& state) {
    const Semiring fz = Semiring::fuzzy_chain(2);
    auto X = PointSet::numbered(2);
    const std::vector<FiniteFunction> gens = {
        FiniteFunction(X, fz, {fz.make_int(1), fz.make_int(2)}),
        FiniteFunction(X, fz, {fz.make_int(2), fz.make_int(0)}),
        FiniteFunction(X, fz, {fz.make_int(1), fz.make_int(1)}),
    };
    for (auto _ : state)
        benchmark::DoNotOptimize(Semimodule::close_under(X, fz, gens, true));
}
BENCHMARK(BM_CloseUnder);

void BM_EnumerateFunctionals(benchmark::State& state) {
    const Semiring b = Semiring::boolean();
    auto X = PointSet::numbered(3);
    const auto fn = [&](int a0, int a1, int a2) {
        return FiniteFunction(
            X, b, {b.make_int(a0), b.make_int(a1), b.make_int(a2)});
    };
    auto V = std::make_shared<const Semimodule>(Semimodule::from_carrier(
        X, b, {fn(0, 0, 0), fn(1, 0, 0), fn(0, 1, 0), fn(1, 1, 1)}));
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_b_linear_functionals(V, 1u << 20));
}
BENCHMARK(BM_EnumerateFunctionals);

}  // namespace

BENCHMARK_MAIN();
