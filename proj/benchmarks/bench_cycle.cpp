#include "qotto/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace qotto;

namespace {

void BM_EigHermitian(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Matrix h = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = 0.1 * i;
    if (i + 1 < dim) {
      h(i, i + 1) = Complex(0.05, 0.02);
      h(i + 1, i) = std::conj(h(i, i + 1));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(h));
}
BENCHMARK(BM_EigHermitian)->Arg(9)->Arg(27);

void BM_DenseStroke(benchmark::State& state) {
  const ExperimentConfig c = preset("fig2ab");
  const HamiltonianSchedule s =
      make_protocol_schedule(c.params, static_cast<int>(state.range(0)),
                             SwapMode::finite_tau, 1.0);
  const DensityMatrix rho = gibbs_state(s.hamiltonian(s.t_a), c.beta_c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(
        rho, [&s](double t) { return s.hamiltonian(t); }, s.t_a, s.t_b, 256,
        1));
  }
}
BENCHMARK(BM_DenseStroke)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DiagonalCycle(benchmark::State& state) {
  const ExperimentConfig c = preset("fig3");
  const int copies = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonal_cycle(c.params, copies, c.beta_c,
                                            c.beta_h, DiagonalMode::perfect));
  }
}
BENCHMARK(BM_DiagonalCycle)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

void BM_ReferenceTemperature(benchmark::State& state) {
  const ExperimentConfig c = preset("fig3");
  const HamiltonianSchedule s =
      make_protocol_schedule(c.params, 3, SwapMode::none, 1.0);
  const Matrix h_b = s.hamiltonian(s.t_b);
  const double target =
      von_neumann_entropy(gibbs_state(s.hamiltonian(s.t_a), c.beta_c));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference_temperature(h_b, target));
}
BENCHMARK(BM_ReferenceTemperature);

}  // namespace

BENCHMARK_MAIN();
