#include <benchmark/benchmark.h>

#include <random>

#include "qfci/guess.hpp"
#include "qfci/phase_estimation.hpp"

using namespace qfci;

namespace {

struct H2 {
  FermionHamiltonian ham =
      build_second_quantized(to_spin_orbitals(parse_fcidump_file(std::string(QFCI_BENCH_DATA) + "/h2_sto3g_1.4011.fcidump")));
  EvolutionWindow window{1.0, -2.0};
  SpectralDecomposition spectra = SpectralDecomposition::full(ham);
  StateVector hf = to_statevector(hf_determinant(2, 1, 1));
  std::vector<PhaseWeight> weights = phase_weights(spectra, window, hf.amplitudes());
};

const H2& h2() {
  static const H2 s;
  return s;
}

}  // namespace

static void BM_IpeaA_H2(benchmark::State& st) {
  const auto& s = h2();
  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  std::mt19937_64 rng(1);
  for (auto _ : st) benchmark::DoNotOptimize(ipea_a_run(s.hf, u, cfg, rng).record.energy);
}
BENCHMARK(BM_IpeaA_H2)->Unit(benchmark::kMicrosecond);

static void BM_IpeaB_H2(benchmark::State& st) {
  const auto& s = h2();
  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  cfg.variant = IpeaVariant::B;
  cfg.repetitions_per_bit = static_cast<int>(st.range(0));
  const GuessBuilder builder = [&s] { return s.hf; };
  std::mt19937_64 rng(2);
  for (auto _ : st) benchmark::DoNotOptimize(ipea_b_run(builder, u, cfg, rng).energy);
}
BENCHMARK(BM_IpeaB_H2)->Arg(11)->Arg(51)->Unit(benchmark::kMicrosecond);

static void BM_PeaDistribution(benchmark::State& st) {
  const auto& s = h2();
  const int m = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(pea_distribution(s.weights, m).probability.data());
}
BENCHMARK(BM_PeaDistribution)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_VersionBRecursion(benchmark::State& st) {
  const auto& s = h2();
  const std::size_t target = component_index(s.spectra, static_cast<std::size_t>(s.spectra.find({1, 1})), 0);
  const int reps = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(ipea_b_success_probability(s.weights, target, 20, reps).probability);
}
BENCHMARK(BM_VersionBRecursion)->Arg(11)->Arg(101)->Unit(benchmark::kMicrosecond);

// the packaged benchmark_main archive carries LTO bytecode from another gcc
BENCHMARK_MAIN();
