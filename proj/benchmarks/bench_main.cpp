#include <benchmark/benchmark.h>

#include "phonon_chill/cooling.hpp"
#include "phonon_chill/spectrum.hpp"

using namespace phonon_chill;

namespace {

SchemeConfig damped(std::size_t fock_dim) {
  SchemeConfig cfg = symmetric_gate_point(0.05, 1.5, 7.5);
  cfg.fock_dim = fock_dim;
  cfg.phonon_damping = 1e-3;
  cfg.bath_occupation = 0.5;
  return cfg;
}

void BM_LiouvillianApply(benchmark::State& state) {
  const SchemeConfig cfg = damped(static_cast<std::size_t>(state.range(0)));
  const HilbertSpace space(cfg.fock_dim);
  const Liouvillian gen(bare_hamiltonian(cfg, space), dissipators(cfg, space));
  const ComplexMatrix rho = initial_state(cfg, 1.0).matrix();
  ComplexMatrix out(rho.rows(), rho.cols());
  for (auto _ : state) {
    gen.apply_hermitian(rho, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LiouvillianApply)->Arg(8)->Arg(15)->Arg(30);

void BM_Spectrum(benchmark::State& state) {
  const SchemeConfig cfg = asymmetric_gate_point(0.1, 2.0, 5.0);
  const std::vector<double> grid = default_grid(-2.0, 3.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(cfg, grid).s_values.data());
}
BENCHMARK(BM_Spectrum)->Arg(101)->Arg(1001);

void BM_SteadyState(benchmark::State& state) {
  const SchemeConfig cfg = damped(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scheme_steady_state(cfg).matrix().data());
}
BENCHMARK(BM_SteadyState)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
