#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qfci/errors.hpp"
#include "qfci/guess.hpp"
#include "qfci/hamiltonian.hpp"
#include "qfci/phase_estimation.hpp"

using namespace qfci;

namespace {

// Diagonal unitary with eigenphase phases[s] on system basis state s; an
// independent stand-in for the molecular propagator.
class DiagonalPhaseU final : public ControlledUnitary {
 public:
  explicit DiagonalPhaseU(std::vector<double> phases) : phases_(std::move(phases)) {}
  int n_system_qubits() const override { return std::countr_zero(phases_.size()); }
  void apply_controlled_power(StateVector& joint, int control, std::uint64_t power) const override {
    auto amps = joint.unitary_view();
    const std::size_t low = (std::size_t{1} << control) - 1;
    for (std::size_t s = 0; s < phases_.size(); ++s) {
      const std::size_t i = ((s & ~low) << 1) | (std::size_t{1} << control) | (s & low);
      const double w = static_cast<double>(power) * phases_[s];
      amps[i] *= std::polar(1.0, 2.0 * std::numbers::pi * (w - std::floor(w)));
    }
  }

 private:
  std::vector<double> phases_;
};

struct H2Setup {
  FermionHamiltonian ham;
  EvolutionWindow window{1.0, -2.0};
  SpectralDecomposition spectra;
  StateVector hf;
  std::vector<PhaseWeight> weights;
  std::size_t ground;

  H2Setup()
      : ham(build_second_quantized(to_spin_orbitals(parse_fcidump_file(oracle::data_path(oracle::kH2Fixture))))),
        spectra(SpectralDecomposition::full(ham)),
        hf(to_statevector(hf_determinant(2, 1, 1))),
        weights(phase_weights(spectra, window, hf.amplitudes())),
        ground(component_index(spectra, static_cast<std::size_t>(spectra.find({1, 1})), 0)) {}
};

const H2Setup& h2() {
  static const H2Setup s;
  return s;
}

bool hits(const OutcomeRecord& r, Turns phase, int m) {
  const auto [d, u] = rounded_outcomes(phase, m);
  return r.bits.integer() == d || r.bits.integer() == u;
}

}  // namespace

TEST(PhaseBits, ValueAndInteger) {
  const auto b = PhaseBits::from_integer(0b1011, 4);
  EXPECT_EQ(b.bits, (std::vector<std::uint8_t>{1, 0, 1, 1}));
  EXPECT_EQ(b.integer(), 11u);
  EXPECT_EQ(b.value(), 11.0 / 16.0);
}

TEST(Config, Validation) {
  IpeaConfig c(EvolutionWindow(1, 0));
  EXPECT_EQ(c.m, 20);
  EXPECT_NO_THROW(c.validate());
  c.repetitions_per_bit = 4;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.repetitions_per_bit = 3;
  c.m = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(FeedbackAngle, Examples) {
  const std::vector<std::uint8_t> any{1, 1, 1, 1, 1};
  EXPECT_EQ(feedback_angle(any, 5), 0.0);
  EXPECT_EQ(feedback_angle(std::vector<std::uint8_t>{0, 0, 1}, 2), -0.25);
  EXPECT_EQ(feedback_angle(std::vector<std::uint8_t>{0, 1, 0, 1}, 1), -5.0 / 16.0);
  EXPECT_THROW(feedback_angle(any, 0), InvalidArgument);
}

TEST(BitProbability, Examples) {
  EXPECT_NEAR(bit_probability(0.5, 1, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(bit_probability(0.0, 3, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(bit_probability(1.0 / 3.0, 2, 0.0), 0.75, 1e-12);
}

TEST(BitProbability, MatchesTwoQubitCircuit) {
  // system qubit 0 in |1> with eigenphase phi; readout qubit 1
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double phi = u(rng), omega = -u(rng) / 2;
    const int k = 1 + t % 4;
    StateVector psi = StateVector::from_amplitudes({0, 1}).with_ancilla();
    apply_gate(psi, Gate::hadamard(), 1);
    apply_gate(psi, Gate::controlled_phase(std::ldexp(phi, k - 1)), 0, 1);
    apply_gate(psi, Gate::rz_phase(omega), 1);
    apply_gate(psi, Gate::hadamard(), 1);
    EXPECT_NEAR(probability_of(psi, 1, 1), bit_probability(phi, k, omega), 1e-12);
  }
}

TEST(PeaDistribution, ExactPhaseIsDeterministic) {
  const PhaseWeight w[] = {{1.0, 5.0 / 16.0}};
  const auto d = pea_distribution(w, 4);
  EXPECT_DOUBLE_EQ(d.probability[5], 1.0);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(PeaDistribution, WorstCaseRemainderBound) {
  double prev = 1.0;
  for (int m : {2, 4, 8, 12, 16, 20}) {
    const double phi = (3.0 + 0.5) / std::ldexp(1.0, m);  // delta = 1/2
    const PhaseWeight w[] = {{1.0, phi}};
    const auto d = pea_distribution(w, m);
    const auto [down, up] = rounded_outcomes(phi, m);
    const double tot = d.probability[down] + d.probability[up];
    EXPECT_GE(tot, 8.0 / (std::numbers::pi * std::numbers::pi) - 1e-12);
    EXPECT_LT(tot, prev);
    prev = tot;
  }
}

TEST(PeaDistribution, LinearSplit) {
  const PhaseWeight w[] = {{0.6, 0.25}, {0.4, 0.625}};
  const auto d = pea_distribution(w, 3);
  EXPECT_NEAR(d.probability[2], 0.6, 1e-15);
  EXPECT_NEAR(d.probability[5], 0.4, 1e-15);
}

TEST(PeaDistribution, MatchesFourierOracleAndNormalizes) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + t % 8;
    std::vector<PhaseWeight> w(5);
    double s = 0;
    for (auto& x : w) s += (x.weight = u(rng)), x.phase = u(rng);
    for (auto& x : w) x.weight /= s;
    const auto d = pea_distribution(w, m);
    EXPECT_NEAR(d.total(), 1.0, 1e-10);
    for (std::uint64_t b = 0; b < (1u << m); ++b) {
      double ref = 0.0;
      for (const auto& x : w) ref += x.weight * oracle::pea_probability(x.phase, b, m);
      EXPECT_NEAR(d.probability[b], ref, 1e-12);
    }
  }
}

TEST(PeaDistribution, Errors) {
  const PhaseWeight bad[] = {{0.5, 0.1}, {0.4, 0.2}};
  EXPECT_THROW(pea_distribution(bad, 4), WeightNormalization);
  const PhaseWeight ok[] = {{1.0, 0.1}};
  EXPECT_THROW(pea_distribution(ok, 0), InvalidArgument);
}

TEST(SuccessA, ExactPhase) {
  const PhaseWeight w[] = {{1.0, 0.375}};
  const auto p = ipea_a_success_probability(w, 0, 3);
  EXPECT_EQ(p.p_down, 1.0);
  EXPECT_EQ(p.p_up, 0.0);
}

TEST(SuccessA, HalfWeightWorstCase) {
  const int m = 20;
  const double phi = (1000.5) / std::ldexp(1.0, m);
  const PhaseWeight w[] = {{0.5, phi}, {0.5, 0.7}};
  const auto p = ipea_a_success_probability(w, 0, m);
  EXPECT_GT(p.total(), 0.81 * 0.5);
  EXPECT_LE(p.total(), 0.5);
}

TEST(SuccessA, EqualsDistributionMassOfTarget) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const int m = 4 + t % 6;
    const PhaseWeight only[] = {{1.0, u(rng)}};
    const auto d = pea_distribution(only, m);
    const auto [down, up] = rounded_outcomes(only[0].phase, m);
    const auto p = ipea_a_success_probability(only, 0, m);
    EXPECT_NEAR(p.p_down, d.probability[down], 1e-12);
    EXPECT_NEAR(p.p_up, d.probability[up], 1e-12);
  }
}

TEST(SuccessA, WrapAround) {
  const int m = 6;
  const double phi = 1.0 - std::ldexp(1.0, -m - 2);  // in (1 - 2^{-m-1}, 1)
  EXPECT_EQ(rounded_outcomes(phi, m), (std::pair<std::uint64_t, std::uint64_t>{63, 0}));
  const PhaseWeight w[] = {{1.0, phi}};
  const auto d = pea_distribution(w, m);
  const auto p = ipea_a_success_probability(w, 0, m);
  EXPECT_NEAR(p.p_up, d.probability[0], 1e-12);
  EXPECT_GT(p.p_up, p.p_down);
}

TEST(DecodeEnergy, Examples) {
  const EvolutionWindow w(-37.5, -39.0);
  EXPECT_EQ(decode_energy(PhaseBits::from_integer(0, 20), w), -37.5);
  const double e_scf = -38.7;
  const EvolutionWindow hf(0.0, 2 * e_scf);
  EXPECT_DOUBLE_EQ(decode_energy(PhaseBits::from_integer(1u << 19, 20), hf), e_scf);
  EXPECT_NEAR(w.width() * std::ldexp(1.0, -20), 1.43e-6, 0.005e-6);
}

TEST(IpeaA, ExactEigenstateGivesExactBits) {
  const std::vector<double> phases{0.0, 0.703125, 0.25, 0.5};  // 0.703125 = 0.101101b
  const DiagonalPhaseU u(phases);
  std::vector<Complex> a(4);
  a[1] = Complex(0.6, 0.8);
  const auto guess = StateVector::from_amplitudes(a);
  IpeaConfig cfg(EvolutionWindow(1.0, 0.0));
  cfg.m = 6;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto run = ipea_a_run(guess, u, cfg, rng);
    EXPECT_EQ(run.record.bits.integer(), 0b101101u);
    EXPECT_NEAR(std::abs(overlap(run.final_system, guess)), 1.0, 1e-12);
  }
}

TEST(IpeaA, H2GroundEigenstateToTwentyBits) {
  const auto& s = h2();
  const auto sec = static_cast<std::size_t>(s.spectra.find({1, 1}));
  const auto ground = StateVector::from_amplitudes(s.spectra.eigenvector(sec, 0));
  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  const double phi = s.window.phase_of(s.spectra.sectors()[sec].eigenvalues[0]);
  const auto [down, up] = rounded_outcomes(phi, 20);
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(seed);
    const auto r = ipea_a_run(ground, u, cfg, rng).record;
    ok += r.bits.integer() == down || r.bits.integer() == up;
  }
  // single eigenstate: at least 8/pi^2 per run; with delta this small the
  // kernel is almost all on one outcome
  const PhaseWeight w[] = {{1.0, phi}};
  EXPECT_GT(ipea_a_success_probability(w, 0, 20).total(), 0.81);
  EXPECT_GE(ok, 35);
}

TEST(IpeaA, SampledFrequencyMatchesAnalytic) {
  const auto& s = h2();
  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  const auto p = ipea_a_success_probability(s.weights, s.ground, 20).total();
  std::mt19937_64 rng(2024);
  const int n = 1000;
  int k = 0;
  for (int i = 0; i < n; ++i) k += hits(ipea_a_run(s.hf, u, cfg, rng).record, s.weights[s.ground].phase, 20);
  const double sigma = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(k) / n, p, 3 * sigma + 1e-12);
}

TEST(IpeaA, RandomSectorGuessLandsNearEigenvalues) {
  // A run lands within one resolution step of some eigenvalue whenever the
  // outcome is one of the two roundings of a populated eigenphase; that
  // event has probability at least 0.81 and is checked against the exact
  // distribution.
  const auto& s = h2();
  std::mt19937_64 rng(99);
  const auto guess = to_statevector(random_sector_state(2, {1, 1}, rng));
  const auto w = phase_weights(s.spectra, s.window, guess.amplitudes());
  const int m = 12;
  const auto dist = pea_distribution(w, m);
  double near_mass = 0.0;
  const double res = s.window.width() * std::ldexp(1.0, -m);
  const auto sec = static_cast<std::size_t>(s.spectra.find({1, 1}));
  const auto& evals = s.spectra.sectors()[sec].eigenvalues;
  const auto near = [&](double e) {
    for (Eigen::Index i = 0; i < evals.size(); ++i)
      if (std::abs(e - evals[i]) < res) return true;
    return false;
  };
  for (std::uint64_t b = 0; b < dist.probability.size(); ++b)
    if (near(decode_energy(PhaseBits::from_integer(b, m), s.window))) near_mass += dist.probability[b];
  EXPECT_GT(near_mass, 0.81);

  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  cfg.m = m;
  const int n = 2000;
  int k = 0;
  for (int i = 0; i < n; ++i) k += near(ipea_a_run(guess, u, cfg, rng).record.energy);
  EXPECT_NEAR(static_cast<double>(k) / n, near_mass, 3 * std::sqrt(near_mass * (1 - near_mass) / n));
}

TEST(IpeaA, FinalStateIsEigenstate) {
  const auto& s = h2();
  const ExactControlledU u(s.spectra, s.window);
  IpeaConfig cfg(s.window);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto run = ipea_a_run(s.hf, u, cfg, rng);
    double best = 0.0;
    for (const auto& c : s.spectra.expand(run.final_system.amplitudes())) best = std::max(best, c.weight());
    EXPECT_GE(best, 1.0 - 1e-9);
  }
}

TEST(IpeaA, RepeatAndHistogram) {
  const DiagonalPhaseU u({0.25, 0.75});
  const auto guess = StateVector::from_amplitudes({std::sqrt(0.5), std::sqrt(0.5)});
  IpeaConfig cfg(EvolutionWindow(1.0, 0.0));
  cfg.m = 2;
  cfg.whole_run_repeats = 400;
  std::mt19937_64 rng(4);
  const auto runs = ipea_a_repeat(guess, u, cfg, rng);
  ASSERT_EQ(runs.size(), 400u);
  const auto h = energy_histogram(runs);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.at(0.75) + h.at(0.25), 400);
  EXPECT_NEAR(h.at(0.75) / 400.0, 0.5, 0.1);
}

TEST(IpeaB, ExactEigenstateOneRepetition) {
  const DiagonalPhaseU u({0.0, 0.8125});  // 0.1101b
  const auto guess = StateVector::from_amplitudes({0, 1});
  IpeaConfig cfg(EvolutionWindow(1.0, 0.0));
  cfg.m = 4;
  cfg.variant = IpeaVariant::B;
  int calls = 0;
  const GuessBuilder builder = [&] {
    ++calls;
    return guess;
  };
  std::mt19937_64 rng(1);
  const auto rec = ipea_b_run(builder, u, cfg, rng);
  EXPECT_EQ(rec.bits.integer(), 0b1101u);
  EXPECT_EQ(calls, 4);
  cfg.repetitions_per_bit = 7;
  calls = 0;
  const auto rec7 = ipea_b_run(builder, u, cfg, rng);
  EXPECT_EQ(calls, 28);
  ASSERT_EQ(rec7.per_bit_stats.size(), 4u);
  EXPECT_EQ(rec7.per_bit_stats[0].ones, 7);  // b_1 = 1
  EXPECT_EQ(rec7.per_bit_stats[2].ones, 0);  // b_3 = 0
}

TEST(Majority, ExactBinomialTail) {
  // independent tail by direct recurrence in long double
  long double pmf = std::pow(0.25L, 51), tail = 0.0L;
  for (int j = 0; j <= 51; ++j) {
    if (j > 0) pmf *= (51.0L - j + 1) / j * (0.75L / 0.25L);
    if (j >= 26) tail += pmf;
  }
  EXPECT_NEAR(majority_probability(0.75, 51), static_cast<double>(tail), 1e-13);
  EXPECT_GE(majority_probability(0.75, 51), 0.9998);
  EXPECT_EQ(majority_probability(0.3, 1), 0.3);
  EXPECT_NEAR(majority_probability(0.5, 11), 0.5, 1e-14);
  EXPECT_THROW(majority_probability(0.5, 2), InvalidArgument);
}

TEST(SuccessB, SingleExactEigenstateIsCertain) {
  const PhaseWeight w[] = {{1.0, 0.6875}};
  for (int reps : {1, 5, 51}) EXPECT_NEAR(ipea_b_success_probability(w, 0, 4, reps).probability, 1.0, 1e-14);
}

TEST(SuccessB, ReducesToVersionAForSingleRepetition) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 10; ++t) {
    const PhaseWeight w[] = {{1.0, u(rng)}};
    const int m = 3 + t % 8;
    const auto b = ipea_b_success_probability(w, 0, m, 1, 0.0);
    EXPECT_NEAR(b.probability, ipea_a_success_probability(w, 0, m).total(), 1e-12);
    EXPECT_EQ(b.pruned_mass, 0.0);
  }
}

TEST(SuccessB, WorstCaseRemainderMatchesMonteCarlo) {
  const int m = 8;
  const double phi = 77.5 / 256.0;
  const PhaseWeight w[] = {{1.0, phi}};
  const DiagonalPhaseU u({0.0, phi});
  const auto guess = StateVector::from_amplitudes({0, 1});
  IpeaConfig cfg(EvolutionWindow(1.0, 0.0));
  cfg.m = m;
  cfg.variant = IpeaVariant::B;
  cfg.repetitions_per_bit = 5;
  const double exact = ipea_b_success_probability(w, 0, m, 5).probability;
  std::mt19937_64 rng(7);
  const int n = 100000;
  int k = 0;
  const GuessBuilder builder = [&guess] { return guess; };
  for (int i = 0; i < n; ++i) k += hits(ipea_b_run(builder, u, cfg, rng), phi, m);
  EXPECT_NEAR(static_cast<double>(k) / n, exact, 0.01);
}

TEST(SuccessB, PruningIsAccounted) {
  const auto& s = h2();
  const auto exact = ipea_b_success_probability(s.weights, s.ground, 20, 11, 0.0);
  const auto pruned = ipea_b_success_probability(s.weights, s.ground, 20, 11, 1e-12);
  EXPECT_LE(pruned.nodes, exact.nodes);
  EXPECT_NEAR(pruned.probability, exact.probability, pruned.pruned_mass + 1e-15);
}

TEST(Weights, ComponentIndexAndNormalization) {
  const auto& s = h2();
  double total = 0.0;
  for (const auto& w : s.weights) {
    total += w.weight;
    EXPECT_GE(w.phase, 0.0);
    EXPECT_LT(w.phase, 1.0);
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_GT(s.weights[s.ground].weight, 0.98);
  EXPECT_GT(ipea_a_success_probability(s.weights, s.ground, 20).total(), 0.5);
  EXPECT_THROW(component_index(s.spectra, 99, 0), IndexOutOfRange);
}
