#include <benchmark/benchmark.h>

#include "rigidmem/integrators.hpp"
#include "rigidmem/kernels.hpp"
#include "rigidmem/models.hpp"
#include "rigidmem/stability.hpp"

namespace rm = rigidmem;
using rm::State3;

namespace {

const rm::RigidBodyParams kP{3.0, 2.0, 1.0};

void BM_Rk4Classical(benchmark::State& st) {
  const double t_end = static_cast<double>(st.range(0));
  for (auto _ : st) {
    auto tr = rm::integrate_rk4([](const State3& x) { return rm::rhs_classical(kP, x); }, State3::Ones(), t_end,
                                1e-3);
    benchmark::DoNotOptimize(tr.states.back());
  }
}
BENCHMARK(BM_Rk4Classical)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DdeQuadrature(benchmark::State& st) {
  const auto k = rm::DelayKernel::exponential(2.0);
  for (auto _ : st) {
    auto tr = rm::integrate_dde([](const State3& x, const State3& xd) { return rm::rhs_delayed(kP, x, xd); }, k,
                                rm::HistorySpec::constant(State3(0.3, 0.2, 0.1)), 2.0, 1e-2,
                                rm::Observables::plain(), 2e-3);
    benchmark::DoNotOptimize(tr.states.back());
  }
}
BENCHMARK(BM_DdeQuadrature)->Unit(benchmark::kMillisecond);

void BM_DdeChain(benchmark::State& st) {
  const auto spec = *rm::chain_reduce(rm::DelayKernel::erlang(2.0));
  for (auto _ : st) {
    auto tr = rm::integrate_chain([](const State3& x, const State3& xd) { return rm::rhs_delayed(kP, x, xd); }, spec,
                                  rm::HistorySpec::constant(State3(0.3, 0.2, 0.1)), 10.0, 1e-2);
    benchmark::DoNotOptimize(tr.states.back());
  }
}
BENCHMARK(BM_DdeChain)->Unit(benchmark::kMillisecond);

void BM_FracAbm(benchmark::State& st) {
  rm::FracConfig cfg;
  cfg.order = 0.82;
  cfg.step = 1e-3;
  const double t_end = static_cast<double>(st.range(0));
  for (auto _ : st) {
    auto tr = rm::integrate_frac_abm([](const State3& x) { return rm::rhs_classical(kP, x); }, cfg, State3::Ones(),
                                     t_end);
    benchmark::DoNotOptimize(tr.states.back());
  }
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_FracAbm)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNSquared);

void BM_CriticalDelayScan(benchmark::State& st) {
  const rm::InertiaSetup s(3, 2, 1, 1.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(rm::critical_delay_scan(s, 50.0, 20000));
}
BENCHMARK(BM_CriticalDelayScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
