#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qfci/propagator.hpp"
#include "qfci/statevector.hpp"

namespace qfci {

/// Binary phase 0.b_1 b_2 ... b_m, most significant bit first.
struct PhaseBits {
  std::vector<std::uint8_t> bits;

  int m() const noexcept { return static_cast<int>(bits.size()); }
  /// Integer outcome sum_i b_i 2^{m-i}.
  std::uint64_t integer() const noexcept;
  /// sum_i b_i 2^{-i}; exact in binary floating point for m <= 52.
  double value() const noexcept;

  static PhaseBits from_integer(std::uint64_t outcome, int m);
};

enum class IpeaVariant { A, B };

struct IpeaConfig {
  int m = 20;
  EvolutionWindow window;
  IpeaVariant variant = IpeaVariant::A;
  int repetitions_per_bit = 1;  // B only; odd
  int whole_run_repeats = 1;    // A only
  std::uint64_t rng_seed = 0;

  explicit IpeaConfig(EvolutionWindow w) : window(w) {}
  /// Throws InvalidArgument on m outside [1, 48], even repetitions or
  /// non-positive repeat counts.
  void validate() const;
};

struct SuccessProbability {
  double p_down = 0.0;
  double p_up = 0.0;
  double total() const noexcept { return p_down + p_up; }
};

/// Majority-vote tally for one phase bit (version B).
struct BitTally {
  int ones = 0;
  int repetitions = 0;
};

struct OutcomeRecord {
  PhaseBits bits;
  double energy = 0.0;
  std::optional<SuccessProbability> probability;
  std::vector<BitTally> per_bit_stats;  // [i-1] for bit b_i; version B only
};

/// Eigenphase of one eigencomponent of the initial guess.
struct PhaseWeight {
  double weight;  // |c_i|^2
  Turns phase;    // in [0, 1)
};

/// Feedback rotation for iteration k:
///   w_k = -sum_{i=2}^{m-k+1} b_{k+i-1} / 2^i.
/// `bits` holds b_1..b_m (m = bits.size()); only b_{k+1}..b_m are read.
Turns feedback_angle(std::span<const std::uint8_t> bits, int k);

/// Probability of reading 1 from one iteration on an eigenstate of phase
/// `phase`: sin^2(pi (2^{k-1} phase + omega)).
double bit_probability(Turns phase, int k, Turns omega);

/// sin^2(2^m pi d) / (2^{2m} sin^2(pi d)), with value 1 at integer d.
double fejer_kernel(double delta, int m);

/// floor(2^m phase) and its successor, both modulo 2^m.
std::pair<std::uint64_t, std::uint64_t> rounded_outcomes(Turns phase, int m);

/// Full m-bit outcome distribution of phase estimation on a superposition
/// of eigenstates.
struct OutcomeDistribution {
  int m = 0;
  std::vector<double> probability;  // indexed by outcome integer

  double total() const noexcept;
};

/// Throws WeightNormalization unless sum of weights is 1 within 1e-10, and
/// InvalidArgument for m outside [1, 24].
OutcomeDistribution pea_distribution(std::span<const PhaseWeight> weights, int m);

/// Probability of decoding the target's phase rounded down / up, attributed
/// to the target eigencomponent (its weight times the kernel at both
/// outcomes). Version A ends collapsed onto an eigenstate, so this is the
/// probability of finishing on the target with an m-bit-accurate phase.
SuccessProbability ipea_a_success_probability(std::span<const PhaseWeight> components,
                                              std::size_t target, int m);

/// Called after every iteration of version A with the measured bit and the
/// post-measurement system register.
using IterationObserver = std::function<void(int k, int bit, const StateVector& system)>;

struct IpeaARun {
  OutcomeRecord record;
  StateVector final_system;
};

/// Version A: the system register is kept (and collapses) across all m
/// iterations, k = m down to 1.
IpeaARun ipea_a_run(const StateVector& guess, const ControlledUnitary& u, const IpeaConfig& cfg,
                    std::mt19937_64& rng, const IterationObserver& observer = {});

/// Repeats version A `cfg.whole_run_repeats` times from the same guess.
std::vector<OutcomeRecord> ipea_a_repeat(const StateVector& guess, const ControlledUnitary& u,
                                         const IpeaConfig& cfg, std::mt19937_64& rng);

/// Decoded energies and their multiplicities.
std::map<double, int> energy_histogram(std::span<const OutcomeRecord> records);

using GuessBuilder = std::function<StateVector()>;

/// Version B: every repetition of every iteration starts from a freshly
/// built guess; each bit is decided by majority vote.
OutcomeRecord ipea_b_run(const GuessBuilder& build_guess, const ControlledUnitary& u,
                         const IpeaConfig& cfg, std::mt19937_64& rng);

/// P(Binomial(repetitions, p) > repetitions / 2), repetitions odd.
double majority_probability(double p, int repetitions);

struct VersionBSuccess {
  double probability = 0.0;
  double pruned_mass = 0.0;  // history mass discarded below the threshold
  std::size_t nodes = 0;
};

/// Exact success probability of version B by recursion over measured-bit
/// histories, branches below `prune` mass dropped (and accounted).
VersionBSuccess ipea_b_success_probability(std::span<const PhaseWeight> components,
                                           std::size_t target, int m, int repetitions,
                                           double prune = 1e-12);

/// E = e_max - value * (e_max - e_min).
double decode_energy(const PhaseBits& bits, const EvolutionWindow& window);

/// Weight and eigenphase of every eigencomponent of `psi`, in
/// SpectralDecomposition::expand order.
std::vector<PhaseWeight> phase_weights(const SpectralDecomposition& spectra,
                                       const EvolutionWindow& window,
                                       std::span<const Complex> psi);

/// Position of (sector, eigen index) in expand/phase_weights order.
std::size_t component_index(const SpectralDecomposition& spectra, std::size_t sector,
                            Eigen::Index index);

}  // namespace qfci
