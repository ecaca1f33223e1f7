#include <benchmark/benchmark.h>

#include <random>

#include "qfci/hamiltonian.hpp"
#include "qfci/propagator.hpp"
#include "qfci/resources.hpp"
#include "qfci/statevector.hpp"

using namespace qfci;

namespace {

StateVector random_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Amplitudes a(std::size_t{1} << n);
  for (auto& x : a) x = Complex(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
  return StateVector::normalized(std::move(a));
}

FermionHamiltonian random_ham(int n_orb, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return build_second_quantized(to_spin_orbitals(random_dense_integrals(n_orb, rng)));
}

}  // namespace

// One Hadamard sweep on a 15-qubit register (the CH2 register size), low
// and high target.
static void BM_Hadamard15(benchmark::State& st) {
  auto psi = random_state(15, 1);
  const int target = static_cast<int>(st.range(0));
  for (auto _ : st) {
    apply_gate(psi, Gate::hadamard(), target);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(psi.dimension()));
}
BENCHMARK(BM_Hadamard15)->Arg(0)->Arg(14);

static void BM_ControlledPhase15(benchmark::State& st) {
  auto psi = random_state(15, 2);
  for (auto _ : st) {
    apply_gate(psi, Gate::controlled_phase(0.123), 3, 14);
    benchmark::DoNotOptimize(psi.amplitudes().data());
  }
}
BENCHMARK(BM_ControlledPhase15);

static void BM_Measure15(benchmark::State& st) {
  const auto psi = random_state(15, 3);
  std::mt19937_64 rng(3);
  for (auto _ : st) {
    auto copy = psi;
    benchmark::DoNotOptimize(measure_qubit(copy, 14, rng));
  }
}
BENCHMARK(BM_Measure15);

// Exact controlled U^(2^k) by eigenphase multiplication, n_orb spatial orbitals.
static void BM_ControlledUExact(benchmark::State& st) {
  const int n_orb = static_cast<int>(st.range(0));
  const auto ham = random_ham(n_orb, 4);
  const Sector sec{(n_orb + 1) / 2, n_orb / 2};
  const auto spectra = SpectralDecomposition::for_sectors(ham, std::span<const Sector>(&sec, 1));
  auto guess = StateVector::from_amplitudes(spectra.eigenvector(0, 0)).with_ancilla();
  apply_gate(guess, Gate::hadamard(), 2 * n_orb);
  const EvolutionWindow w(10.0, -10.0);
  for (auto _ : st) {
    controlled_u_power_exact(spectra, w, std::uint64_t{1} << 19, guess, 2 * n_orb);
    benchmark::DoNotOptimize(guess.amplitudes().data());
  }
}
BENCHMARK(BM_ControlledUExact)->Arg(2)->Arg(4)->Arg(6);

// One first-order Trotter slice of a dense random Hamiltonian.
static void BM_TrotterSlice(benchmark::State& st) {
  const int n_orb = static_cast<int>(st.range(0));
  const auto ham = random_ham(n_orb, 5);
  const TrotterPropagator tp(ham, EvolutionWindow(10.0, -10.0), TrotterPlan::in_emission_order(ham, 1));
  auto psi = random_state(2 * n_orb, 6);
  Amplitudes a(psi.amplitudes().begin(), psi.amplitudes().end());
  for (auto _ : st) {
    tp.apply(a);
    benchmark::DoNotOptimize(a.data());
  }
  st.counters["factors"] = static_cast<double>(tp.factor_count());
}
BENCHMARK(BM_TrotterSlice)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);

static void BM_JordanWigner(benchmark::State& st) {
  const auto ham = random_ham(static_cast<int>(st.range(0)), 7);
  for (auto _ : st) benchmark::DoNotOptimize(jordan_wigner(ham).size());
  st.counters["terms"] = static_cast<double>(ham.size());
}
BENCHMARK(BM_JordanWigner)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ApplyFermion(benchmark::State& st) {
  const int n_orb = static_cast<int>(st.range(0));
  const auto ham = random_ham(n_orb, 8);
  const auto psi = random_state(2 * n_orb, 9);
  Amplitudes out(psi.dimension());
  for (auto _ : st) {
    apply_fermion(ham, psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyFermion)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
