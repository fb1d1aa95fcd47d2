#include <benchmark/benchmark.h>

#include <numbers>

#include "pns/inequality.hpp"

namespace {

void BM_HardyBump(benchmark::State& state) {
    const double h = std::numbers::pi;
    const auto f = pns::bump_field({h, h, h}, 0.5 * h);
    const pns::HardyOptions opt{static_cast<int>(state.range(0)), 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(pns::hardy_check(f, 2.0, 3, opt));
}
BENCHMARK(BM_HardyBump)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
