#include "qfci/phase_estimation.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qfci/errors.hpp"

namespace qfci {

namespace {

constexpr int kMaxBits = 48;
constexpr int kMaxDistributionBits = 24;

double frac(double x) noexcept { return x - std::floor(x); }

void check_bits(int m, int limit) {
  if (m < 1 || m > limit)
    throw InvalidArgument("bit count " + std::to_string(m) + " outside [1, " +
                          std::to_string(limit) + "]");
}

}  // namespace

std::uint64_t PhaseBits::integer() const noexcept {
  std::uint64_t b = 0;
  for (auto bit : bits) b = (b << 1) | (bit & 1u);
  return b;
}

double PhaseBits::value() const noexcept {
  return std::ldexp(static_cast<double>(integer()), -m());
}

PhaseBits PhaseBits::from_integer(std::uint64_t outcome, int m) {
  PhaseBits p;
  p.bits.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) p.bits[i] = static_cast<std::uint8_t>((outcome >> (m - 1 - i)) & 1u);
  return p;
}

void IpeaConfig::validate() const {
  check_bits(m, kMaxBits);
  if (repetitions_per_bit < 1 || repetitions_per_bit % 2 == 0)
    throw InvalidArgument("repetitions per bit must be a positive odd number");
  if (whole_run_repeats < 1) throw InvalidArgument("whole-run repeats must be positive");
}

Turns feedback_angle(std::span<const std::uint8_t> bits, int k) {
  const int m = static_cast<int>(bits.size());
  if (k < 1 || k > m) throw InvalidArgument("iteration index k outside [1, m]");
  double w = 0.0;
  for (int i = 2; i <= m - k + 1; ++i) w -= std::ldexp(static_cast<double>(bits[k + i - 2]), -i);
  return w;
}

double bit_probability(Turns phase, int k, Turns omega) {
  const double s = std::sin(std::numbers::pi * (frac(std::ldexp(phase, k - 1)) + omega));
  return s * s;
}

double fejer_kernel(double delta, int m) {
  const double x = std::ldexp(delta, m);  // 2^m delta
  const double f = frac(x);
  if (f == 0.0) {
    // integer 2^m delta: 1 when delta itself is an integer, else 0
    return frac(delta) == 0.0 ? 1.0 : 0.0;
  }
  // reduce to the nearest integer so a small negative delta keeps its precision
  const double num = std::sin(std::numbers::pi * (x - std::nearbyint(x)));
  const double den = std::sin(std::numbers::pi * (delta - std::nearbyint(delta)));
  const double scale = std::ldexp(1.0, -m);
  const double r = num * scale / den;
  return r * r;
}

std::pair<std::uint64_t, std::uint64_t> rounded_outcomes(Turns phase, int m) {
  const std::uint64_t size = std::uint64_t{1} << m;
  const auto down = static_cast<std::uint64_t>(std::floor(std::ldexp(frac(phase), m))) % size;
  return {down, (down + 1) % size};
}

double OutcomeDistribution::total() const noexcept {
  double s = 0.0;
  for (double p : probability) s += p;
  return s;
}

OutcomeDistribution pea_distribution(std::span<const PhaseWeight> weights, int m) {
  check_bits(m, kMaxDistributionBits);
  double wsum = 0.0;
  for (const auto& w : weights) {
    if (w.weight < 0.0) throw WeightNormalization("negative weight");
    wsum += w.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-10)
    throw WeightNormalization("weights sum to " + std::to_string(wsum) + ", expected 1");

  OutcomeDistribution dist;
  dist.m = m;
  const std::size_t size = std::size_t{1} << m;
  dist.probability.assign(size, 0.0);
  const double scale = std::ldexp(1.0, -m);
  for (const auto& w : weights) {
    if (w.weight == 0.0) continue;
    const double x = std::ldexp(frac(w.phase), m);  // 2^m phase in [0, 2^m)
    const double fx = frac(x);
    if (fx == 0.0) {
      dist.probability[static_cast<std::size_t>(x) % size] += w.weight;
      continue;
    }
    // numerator sin^2(pi (x - b)) = sin^2(pi x) for integer b
    const double num = std::sin(std::numbers::pi * fx) * scale;
    const double num2 = num * num;
    for (std::size_t b = 0; b < size; ++b) {
      const double den = std::sin(std::numbers::pi * (x - static_cast<double>(b)) * scale);
      dist.probability[b] += w.weight * num2 / (den * den);
    }
  }
  return dist;
}

SuccessProbability ipea_a_success_probability(std::span<const PhaseWeight> components,
                                              std::size_t target, int m) {
  check_bits(m, kMaxBits);
  if (target >= components.size()) throw IndexOutOfRange("target eigencomponent out of range");
  const auto& t = components[target];
  const auto [down, up] = rounded_outcomes(t.phase, m);
  const double scale = std::ldexp(1.0, -m);
  SuccessProbability p;
  p.p_down = t.weight * fejer_kernel(t.phase - static_cast<double>(down) * scale, m);
  p.p_up = t.weight * fejer_kernel(t.phase - static_cast<double>(up) * scale, m);
  return p;
}

IpeaARun ipea_a_run(const StateVector& guess, const ControlledUnitary& u, const IpeaConfig& cfg,
                    std::mt19937_64& rng, const IterationObserver& observer) {
  cfg.validate();
  if (guess.n_qubits() != u.n_system_qubits())
    throw DimensionMismatch("guess register does not match the propagator");
  const int m = cfg.m;
  const int readout = guess.n_qubits();
  StateVector joint = guess.with_ancilla();
  PhaseBits bits;
  bits.bits.assign(static_cast<std::size_t>(m), 0);

  for (int k = m; k >= 1; --k) {
    apply_gate(joint, Gate::hadamard(), readout);
    u.apply_controlled_power(joint, readout, std::uint64_t{1} << (k - 1));
    apply_gate(joint, Gate::rz_phase(feedback_angle(bits.bits, k)), readout);
    apply_gate(joint, Gate::hadamard(), readout);
    const int bit = measure_qubit(joint, readout, rng);
    if (bit) apply_gate(joint, Gate::x(), readout);  // reset for the next iteration
    bits.bits[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(bit);
    if (observer) observer(k, bit, joint.without_qubit(readout, 0));
  }

  OutcomeRecord rec;
  rec.energy = decode_energy(bits, cfg.window);
  rec.bits = std::move(bits);
  return {std::move(rec), joint.without_qubit(readout, 0)};
}

std::vector<OutcomeRecord> ipea_a_repeat(const StateVector& guess, const ControlledUnitary& u,
                                         const IpeaConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  std::vector<OutcomeRecord> out;
  out.reserve(static_cast<std::size_t>(cfg.whole_run_repeats));
  for (int r = 0; r < cfg.whole_run_repeats; ++r) out.push_back(ipea_a_run(guess, u, cfg, rng).record);
  return out;
}

std::map<double, int> energy_histogram(std::span<const OutcomeRecord> records) {
  std::map<double, int> h;
  for (const auto& r : records) ++h[r.energy];
  return h;
}

OutcomeRecord ipea_b_run(const GuessBuilder& build_guess, const ControlledUnitary& u,
                         const IpeaConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  const int m = cfg.m;
  const int reps = cfg.repetitions_per_bit;
  const int n_sys = u.n_system_qubits();
  PhaseBits bits;
  bits.bits.assign(static_cast<std::size_t>(m), 0);
  std::vector<BitTally> tallies(static_cast<std::size_t>(m));

  for (int k = m; k >= 1; --k) {
    const Turns omega = feedback_angle(bits.bits, k);
    const std::uint64_t power = std::uint64_t{1} << (k - 1);
    int ones = 0;
    for (int r = 0; r < reps; ++r) {
      const StateVector guess = build_guess();
      if (guess.n_qubits() != n_sys)
        throw DimensionMismatch("guess register does not match the propagator");
      StateVector joint = guess.with_ancilla();
      apply_gate(joint, Gate::hadamard(), n_sys);
      u.apply_controlled_power(joint, n_sys, power);
      apply_gate(joint, Gate::rz_phase(omega), n_sys);
      apply_gate(joint, Gate::hadamard(), n_sys);
      ones += measure_qubit(joint, n_sys, rng);
    }
    tallies[static_cast<std::size_t>(k - 1)] = {ones, reps};
    bits.bits[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(2 * ones > reps);
  }

  OutcomeRecord rec;
  rec.energy = decode_energy(bits, cfg.window);
  rec.bits = std::move(bits);
  rec.per_bit_stats = std::move(tallies);
  return rec;
}

double majority_probability(double p, int repetitions) {
  if (repetitions < 1 || repetitions % 2 == 0)
    throw InvalidArgument("repetitions must be a positive odd number");
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // Sum the smaller tail directly to keep precision near 0 and 1.
  const int need = repetitions / 2 + 1;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const auto pmf = [&](int j) {
    return std::exp(std::lgamma(repetitions + 1.0) - std::lgamma(j + 1.0) -
                    std::lgamma(repetitions - j + 1.0) + j * lp + (repetitions - j) * lq);
  };
  if (p < 0.5) {
    double s = 0.0;
    for (int j = need; j <= repetitions; ++j) s += pmf(j);
    return s;
  }
  double s = 0.0;
  for (int j = 0; j < need; ++j) s += pmf(j);
  return 1.0 - s;
}

VersionBSuccess ipea_b_success_probability(std::span<const PhaseWeight> components,
                                           std::size_t target, int m, int repetitions,
                                           double prune) {
  check_bits(m, kMaxBits);
  if (target >= components.size()) throw IndexOutOfRange("target eigencomponent out of range");
  if (repetitions < 1 || repetitions % 2 == 0)
    throw InvalidArgument("repetitions must be a positive odd number");

  std::vector<PhaseWeight> live;
  for (const auto& c : components)
    if (c.weight > 0.0) live.push_back(c);
  // scaled[k-1][i] = frac(2^{k-1} phase_i)
  std::vector<std::vector<double>> scaled(static_cast<std::size_t>(m));
  for (int k = 1; k <= m; ++k) {
    auto& row = scaled[static_cast<std::size_t>(k - 1)];
    row.reserve(live.size());
    for (const auto& c : live) row.push_back(frac(std::ldexp(c.phase, k - 1)));
  }
  const auto [down, up] = rounded_outcomes(components[target].phase, m);

  VersionBSuccess result;
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(m), 0);

  std::function<void(int, double)> descend = [&](int k, double mass) {
    ++result.nodes;
    if (k == 0) {
      std::uint64_t b = 0;
      for (auto bit : bits) b = (b << 1) | bit;
      if (b == down || b == up) result.probability += mass;
      return;
    }
    const Turns omega = feedback_angle(bits, k);
    const auto& row = scaled[static_cast<std::size_t>(k - 1)];
    double p1 = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const double s = std::sin(std::numbers::pi * (row[i] + omega));
      p1 += live[i].weight * s * s;
    }
    const double vote1 = majority_probability(std::min(1.0, p1), repetitions);
    for (int bit = 1; bit >= 0; --bit) {
      const double child = mass * (bit ? vote1 : 1.0 - vote1);
      if (child <= 0.0) continue;
      if (child < prune) {
        result.pruned_mass += child;
        continue;
      }
      bits[static_cast<std::size_t>(k - 1)] = static_cast<std::uint8_t>(bit);
      descend(k - 1, child);
    }
    bits[static_cast<std::size_t>(k - 1)] = 0;
  };
  double total = 0.0;
  for (const auto& c : live) total += c.weight;
  descend(m, total);
  return result;
}

double decode_energy(const PhaseBits& bits, const EvolutionWindow& window) {
  return window.energy_of(bits.value());
}

std::vector<PhaseWeight> phase_weights(const SpectralDecomposition& spectra,
                                       const EvolutionWindow& window,
                                       std::span<const Complex> psi) {
  std::vector<PhaseWeight> out;
  for (const auto& c : spectra.expand(psi)) out.push_back({c.weight(), frac(window.phase_of(c.energy))});
  return out;
}

std::size_t component_index(const SpectralDecomposition& spectra, std::size_t sector,
                            Eigen::Index index) {
  const auto& secs = spectra.sectors();
  if (sector >= secs.size() || index < 0 ||
      static_cast<std::size_t>(index) >= secs[sector].dimension())
    throw IndexOutOfRange("eigencomponent out of range");
  std::size_t offset = 0;
  for (std::size_t s = 0; s < sector; ++s) offset += secs[s].dimension();
  return offset + static_cast<std::size_t>(index);
}

}  // namespace qfci
