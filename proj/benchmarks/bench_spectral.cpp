#include <benchmark/benchmark.h>

#include <cmath>

#include "pns/spectral.hpp"

namespace {

pns::ScalarField field(int n) {
    const auto g = pns::make_grid(n, 1.0);
    return pns::ScalarField::sample(g, [](double x, double y, double z) { return std::sin(x) * std::cos(2 * y) + std::sin(3 * z); });
}

void BM_ForwardFft(benchmark::State& state) {
    const auto f = field(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pns::to_spectral(f));
}
BENCHMARK(BM_ForwardFft)->Arg(16)->Arg(32)->Arg(64);

void BM_Derivative(benchmark::State& state) {
    const auto f = pns::to_spectral(field(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(pns::derivative(f, pns::Axis::y, 1));
}
BENCHMARK(BM_Derivative)->Arg(32)->Arg(64);

void BM_Leray(benchmark::State& state) {
    const auto f = pns::to_spectral(field(static_cast<int>(state.range(0))));
    const pns::VectorField v(f, f, f);
    for (auto _ : state) benchmark::DoNotOptimize(pns::leray_project(v));
}
BENCHMARK(BM_Leray)->Arg(32);

}  // namespace
