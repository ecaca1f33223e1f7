#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>

#include "qfci/types.hpp"

namespace qfci {

/// Angles are in turns (fractions of 2*pi): a phase of w turns is e^{2 pi i w}.
using Turns = double;

enum class GateKind { Hadamard, RzPhase, PauliX, PauliY, PauliZ, ControlledPhase };

struct Gate {
  GateKind kind = GateKind::Hadamard;
  Turns angle = 0.0;

  static Gate hadamard() { return {GateKind::Hadamard, 0.0}; }
  /// diag(1, e^{2 pi i w})
  static Gate rz_phase(Turns w) { return {GateKind::RzPhase, w}; }
  static Gate x() { return {GateKind::PauliX, 0.0}; }
  static Gate y() { return {GateKind::PauliY, 0.0}; }
  static Gate z() { return {GateKind::PauliZ, 0.0}; }
  /// diag(1, 1, 1, e^{2 pi i w}); requires a control qubit.
  static Gate controlled_phase(Turns w) { return {GateKind::ControlledPhase, w}; }
};

/// Row-major 2x2 single-qubit matrix of a gate; the controlled-phase gate
/// yields its target block diag(1, e^{2 pi i w}).
std::array<Complex, 4> gate_matrix(const Gate& gate);

/// Uniform double in [0, 1) from the top 53 bits of one generator draw.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Simulated register of n qubits. Qubit j is bit j of the basis index.
class StateVector {
 public:
  static constexpr int kDefaultQubitCap = 24;

  /// |0...0> on n qubits. Throws CapExceeded when n > cap, InvalidArgument
  /// when n < 1.
  explicit StateVector(int n_qubits, int cap = kDefaultQubitCap);

  /// Takes ownership of `amplitudes` (size must be a power of two). Throws
  /// InvalidArgument unless the norm is 1 within 1e-10.
  static StateVector from_amplitudes(Amplitudes amplitudes, int cap = kDefaultQubitCap);

  /// Normalizes `amplitudes` first. Throws DegenerateState on a zero vector.
  static StateVector normalized(Amplitudes amplitudes, int cap = kDefaultQubitCap);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const noexcept { return amps_[i]; }

  double norm() const noexcept;

  /// Mutable access for propagators that apply unitary maps directly.
  /// Callers must preserve the norm.
  std::span<Complex> unitary_view() noexcept { return amps_; }

  /// |this> (x) |0> with the fresh qubit appended as the highest index.
  StateVector with_ancilla(int cap = kDefaultQubitCap) const;

  /// Removes qubit `index`, which must be in the definite state `value`.
  StateVector without_qubit(int index, int value, double tol = 1e-12) const;

  /// Raw little-endian (re, im) double pairs.
  void dump_binary(std::ostream& out) const;

 private:
  StateVector() = default;

  int n_qubits_ = 0;
  Amplitudes amps_;
};

/// Applies `gate` on `target`, optionally conditioned on `control` being |1>.
/// Throws IndexOutOfRange on bad indices or control == target.
void apply_gate(StateVector& psi, const Gate& gate, int target,
                std::optional<int> control = std::nullopt);

/// Samples a Born-rule outcome for qubit `index`, collapses and renormalizes.
int measure_qubit(StateVector& psi, int index, std::mt19937_64& rng);

/// Projects qubit `index` onto `value` and renormalizes. Throws
/// DegenerateState if that branch has vanishing norm.
void collapse_qubit(StateVector& psi, int index, int value);

/// Sum of |a|^2 over basis states with qubit `index` equal to `value`.
double probability_of(const StateVector& psi, int index, int value);

/// <psi|phi>
Complex overlap(const StateVector& psi, const StateVector& phi);
Complex overlap(std::span<const Complex> psi, std::span<const Complex> phi);

}  // namespace qfci
