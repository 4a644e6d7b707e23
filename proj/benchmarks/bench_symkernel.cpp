#include "jetgeom/symkernel/symkernel.hpp"

#include <benchmark/benchmark.h>

using namespace jetgeom::sym;

namespace {

const CoordinateSystem& coords() {
    static const CoordinateSystem c(1, 2);
    return c;
}

constexpr const char* kLagrangian = "exp(2*t1)*(v1_1^2 + sin(x1)^2*v2_1^2) + x1*v1_1/(1 + x2^2) + 7";

void BM_Parse(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(parse_expression(kLagrangian, coords()));
}
BENCHMARK(BM_Parse);

void BM_Canonical(benchmark::State& state) {
    const Expr e = parse_expression(kLagrangian, coords());
    for (auto _ : state) benchmark::DoNotOptimize(canonical(e));
}
BENCHMARK(BM_Canonical);

void BM_SecondVelocityDerivative(benchmark::State& state) {
    const Expr e = parse_expression(kLagrangian, coords());
    const int v = coords().velocity(1, 0);
    for (auto _ : state) benchmark::DoNotOptimize(differentiate(differentiate(e, v), v));
}
BENCHMARK(BM_SecondVelocityDerivative);

void BM_RationalSimplification(benchmark::State& state) {
    const Expr e = parse_expression("(x1^2 - x2^2)/(x1 - x2) + cos(x1)^2/sin(x1) + sin(x1)", coords());
    for (auto _ : state) benchmark::DoNotOptimize(normalize(e));
}
BENCHMARK(BM_RationalSimplification);

void BM_NumericZeroTest(benchmark::State& state) {
    const RatFunc f = canonical(parse_expression("sin(2*x1) - 2*sin(x1)*cos(x1)", coords()));
    for (auto _ : state) benchmark::DoNotOptimize(is_zero(f, coords().size()));
}
BENCHMARK(BM_NumericZeroTest);

}  // namespace
