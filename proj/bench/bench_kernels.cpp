// Serial reference versus OpenMP driver for each row kernel. The grid size is
// the benchmark argument; LOCMOM_THREADS caps the OpenMP team.

#include <benchmark/benchmark.h>

#include <vector>

#include "kernels/kernels.hpp"
#include "locmom/spectral.hpp"
#include "locmom/states.hpp"

namespace k = locmom::kernels;

namespace {

locmom::Wavefunction bench_state(int n) {
  const auto g = locmom::make_grid(n, -20, 20);
  return locmom::synthesize(locmom::superposition({{locmom::cplx{1, 0}, locmom::gaussian(1, 1, -3)},
                                                   {locmom::cplx{0, 1}, locmom::oscillator(3, 1)}}),
                            g);
}

template <auto Kernel>
void wigner_rows(benchmark::State& state) {
  const auto psi = bench_state(static_cast<int>(state.range(0)));
  std::vector<double> out(static_cast<std::size_t>(psi.size()) * psi.size());
  for (auto _ : state) {
    Kernel(k::WignerArgs{psi.view(), false, 1.0}, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void margenau_hill_rows(benchmark::State& state) {
  const auto psi = bench_state(static_cast<int>(state.range(0)));
  const auto phi = locmom::momentum_representation(psi);
  std::vector<double> out(static_cast<std::size_t>(psi.size()) * psi.size());
  for (auto _ : state) {
    Kernel(k::MargenauHillArgs{psi.view(), phi.phi}, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void conditional_rows(benchmark::State& state) {
  const auto psi = bench_state(static_cast<int>(state.range(0)));
  const auto n = static_cast<std::size_t>(psi.size());
  std::vector<double> out(n * n);
  std::vector<std::uint8_t> defined(n);
  for (auto _ : state) {
    Kernel(k::ConditionalArgs{psi.view(), 1e-8, 1.0}, out, defined);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void row_stats(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> f(n * n), a(n * n), mass(n), mean(n), variance(n);
  for (std::size_t c = 0; c < f.size(); ++c) {
    f[c] = 1.0 + static_cast<double>(c % 7);
    a[c] = static_cast<double>(c % 13) - 6.0;
  }
  for (auto _ : state) {
    Kernel(k::RowStatsArgs{f, a, static_cast<int>(n), 0.01}, k::RowStatsOut{mass, mean, variance});
    benchmark::DoNotOptimize(variance.data());
  }
}

}  // namespace

// wall time, since OpenMP work runs off the timing thread
#define LOCMOM_PAIR(name)                                                                            \
  BENCHMARK(name<k::serial::name>)->Name(#name "/serial")->Arg(256)->Arg(512)->Arg(1024)->UseRealTime(); \
  BENCHMARK(name<k::openmp::name>)->Name(#name "/openmp")->Arg(256)->Arg(512)->Arg(1024)->UseRealTime()

LOCMOM_PAIR(wigner_rows);
LOCMOM_PAIR(margenau_hill_rows);
LOCMOM_PAIR(conditional_rows);
LOCMOM_PAIR(row_stats);

BENCHMARK_MAIN();
