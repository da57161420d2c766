// Microbenchmarks for the hot paths: the tridiagonal sweep kernel, exchange
// Hamiltonian assembly, the sector-block dissipative propagator, and the
// tracked eigendecomposition.

#include <benchmark/benchmark.h>

#include <fsl/dynamics.hpp>
#include <fsl/experiments.hpp>
#include <fsl/fockspace.hpp>
#include <fsl/model.hpp>
#include <fsl/params.hpp>
#include <fsl/spectral.hpp>

using namespace fsl;

namespace {

void BM_ChainSweepReference(benchmark::State& state) {
  const PhysicalParams p;
  for (auto _ : state)
    benchmark::DoNotOptimize(unitary_chain_fidelity(5, p.g(), 8.2, 2000));
}
BENCHMARK(BM_ChainSweepReference);

void BM_ChainSweepLargest(benchmark::State& state) {
  const PhysicalParams p;
  const int steps = chain_steps_policy(32, p.g(), 146.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(unitary_chain_fidelity(32, p.g(), 146.0, steps));
}
BENCHMARK(BM_ChainSweepLargest);

void BM_ExchangeHamiltonianBuild(benchmark::State& state) {
  const auto basis =
      CompositeBasis::build(static_cast<int>(state.range(0)), BasisMode::AllSectorsUpTo);
  Eigen::MatrixXcd H(basis.size(), basis.size());
  for (auto _ : state) {
    superatom_jc_into(1.1, 0.7, basis, H);
    benchmark::DoNotOptimize(H.data());
  }
}
BENCHMARK(BM_ExchangeHamiltonianBuild)->Arg(5)->Arg(10);

void BM_SectorBlockDissipativeRun(benchmark::State& state) {
  const PhysicalParams p;
  SectorBlockLindblad engine(5, p.Gamma0(), p.kappa_o(), p.kappa_m());
  const PulseSchedule schedule{p.g(), p.T_us, PulseFamily::SinCos};
  RecordOptions rec;
  rec.samples = 0;
  rec.record_sites = false;
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto res = engine.run(schedule, 1.0, 1.0, steps, rec);
    benchmark::DoNotOptimize(res.final_n_optical);
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_SectorBlockDissipativeRun)->Arg(100)->Arg(2000);

void BM_TrackedEigendecomposition(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const Eigen::MatrixXd H = chain_matrix(chain_model(N, 0.6, 0.8));
  SpectrumSnapshot prev = instantaneous_spectrum(H, 0.0);
  for (auto _ : state) {
    SpectrumSnapshot snap = instantaneous_spectrum(H, 0.0, &prev);
    benchmark::DoNotOptimize(snap.eigenvalues.data());
  }
}
BENCHMARK(BM_TrackedEigendecomposition)->Arg(5)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
