#include <benchmark/benchmark.h>

#include <vector>

#include "fbiharm/jets/expr.hpp"

using namespace fbiharm;

static void BM_JetProduct(benchmark::State& state)
{
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const std::size_t order = static_cast<std::size_t>(state.range(1));
    std::vector<double> p(dim, 0.3);
    const auto x = seed_jets(p, order);
    Jet a = x[0] + 2.0 * x[dim - 1];
    const Jet b = sin(x[0]) + 1.5;
    for (auto _ : state) {
        Jet c = a * b;
        benchmark::DoNotOptimize(c.coefficients().data());
    }
}
BENCHMARK(BM_JetProduct)->Args({2, 4})->Args({3, 4})->Args({4, 4})->Args({5, 4})->Args({4, 6});

static void BM_ExprEvaluate(benchmark::State& state)
{
    const Expr e = parse_expression("exp(x2/2) * cos(x1) / (1 + x1^2 + x2^2 + x3^2)");
    std::vector<double> p{0.2, -0.4, 0.7};
    const auto x = seed_jets(p, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        Jet j = eval_expression(e, x);
        benchmark::DoNotOptimize(j.coefficients().data());
    }
}
BENCHMARK(BM_ExprEvaluate)->DenseRange(2, 6, 2);

static void BM_Compose(benchmark::State& state)
{
    std::vector<double> p{0.2, -0.4};
    const auto x = seed_jets(p, 4);
    const std::vector<Jet> inner{x[0] * x[1] + 1.0, sin(x[0]), cos(x[1])};
    std::vector<double> y0{inner[0].value(), inner[1].value(), inner[2].value()};
    const auto y = seed_jets(y0, 4);
    const Jet outer = 4.0 / pow(1.0 + y[0] * y[0] + y[1] * y[1] + y[2] * y[2], 2);
    for (auto _ : state) {
        const JetComposer composer(inner, 3);
        Jet c = composer.apply(outer);
        benchmark::DoNotOptimize(c.coefficients().data());
    }
}
BENCHMARK(BM_Compose);
