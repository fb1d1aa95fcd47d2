#include <benchmark/benchmark.h>

#include "pns/closed_form.hpp"
#include "pns/solver.hpp"

namespace {

void BM_SolverStep(benchmark::State& state) {
    const auto g = pns::make_grid(static_cast<int>(state.range(0)), 1.0);
    pns::FlowParams p;
    p.rho = 1.0;
    p.mu = 0.1;
    const auto tg = pns::taylor_green(p.nu(), p.rho);
    const auto s = pns::init(tg.sample_velocity(g, 0.0), p, 1e-3);
    for (auto _ : state) benchmark::DoNotOptimize(pns::step(s));
}
BENCHMARK(BM_SolverStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
