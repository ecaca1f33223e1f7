#include "qfci/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qfci/errors.hpp"

namespace qfci {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kDegenerateBranch = 1e-15;

Complex phase_turns(Turns w) {
  const double a = 2.0 * std::numbers::pi * w;
  return {std::cos(a), std::sin(a)};
}

void check_index(const StateVector& psi, int index, const char* what) {
  if (index < 0 || index >= psi.n_qubits())
    throw IndexOutOfRange(std::string(what) + " qubit " + std::to_string(index) +
                          " outside register of " + std::to_string(psi.n_qubits()) + " qubits");
}

double norm2(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return s;
}

}  // namespace

std::array<Complex, 4> gate_matrix(const Gate& gate) {
  const double r = std::numbers::sqrt2 / 2.0;
  switch (gate.kind) {
    case GateKind::Hadamard:
      return {Complex{r}, Complex{r}, Complex{r}, Complex{-r}};
    case GateKind::RzPhase:
    case GateKind::ControlledPhase:
      return {Complex{1}, Complex{}, Complex{}, phase_turns(gate.angle)};
    case GateKind::PauliX:
      return {Complex{}, Complex{1}, Complex{1}, Complex{}};
    case GateKind::PauliY:
      return {Complex{}, Complex{0, -1}, Complex{0, 1}, Complex{}};
    case GateKind::PauliZ:
      return {Complex{1}, Complex{}, Complex{}, Complex{-1}};
  }
  return {};
}

StateVector::StateVector(int n_qubits, int cap) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("register needs at least one qubit");
  if (n_qubits > cap)
    throw CapExceeded(std::to_string(n_qubits) + " qubits exceeds cap of " + std::to_string(cap));
  amps_.assign(std::size_t{1} << n_qubits, Complex{});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(Amplitudes amplitudes, int cap) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim))
    throw InvalidArgument("amplitude count must be a power of two >= 2");
  const int n = std::countr_zero(dim);
  if (n > cap) throw CapExceeded(std::to_string(n) + " qubits exceeds cap of " + std::to_string(cap));
  const double nrm = std::sqrt(norm2(amplitudes));
  if (std::abs(nrm - 1.0) > kNormTolerance)
    throw InvalidArgument("amplitudes are not normalized (norm " + std::to_string(nrm) + ")");
  StateVector sv;
  sv.n_qubits_ = n;
  sv.amps_ = std::move(amplitudes);
  return sv;
}

StateVector StateVector::normalized(Amplitudes amplitudes, int cap) {
  const double nrm = std::sqrt(norm2(amplitudes));
  if (nrm < kDegenerateBranch) throw DegenerateState("cannot normalize a zero vector");
  for (auto& a : amplitudes) a /= nrm;
  return from_amplitudes(std::move(amplitudes), cap);
}

double StateVector::norm() const noexcept { return std::sqrt(norm2(amps_)); }

StateVector StateVector::with_ancilla(int cap) const {
  if (n_qubits_ + 1 > cap)
    throw CapExceeded(std::to_string(n_qubits_ + 1) + " qubits exceeds cap of " + std::to_string(cap));
  StateVector sv;
  sv.n_qubits_ = n_qubits_ + 1;
  sv.amps_.assign(amps_.size() * 2, Complex{});
  std::copy(amps_.begin(), amps_.end(), sv.amps_.begin());
  return sv;
}

StateVector StateVector::without_qubit(int index, int value, double tol) const {
  check_index(*this, index, "removed");
  if (n_qubits_ < 2) throw InvalidArgument("cannot remove the only qubit");
  const std::size_t low = (std::size_t{1} << index) - 1;
  Amplitudes out(amps_.size() / 2);
  double other = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const int bit = static_cast<int>((i >> index) & 1u);
    if (bit != value) {
      other += std::norm(amps_[i]);
      continue;
    }
    out[(i & low) | ((i >> (index + 1)) << index)] = amps_[i];
  }
  if (other > tol) throw InvalidArgument("qubit is not in a definite state");
  return normalized(std::move(out), n_qubits_);
}

void StateVector::dump_binary(std::ostream& out) const {
  static_assert(std::endian::native == std::endian::little, "binary dump assumes little-endian");
  out.write(reinterpret_cast<const char*>(amps_.data()),
            static_cast<std::streamsize>(amps_.size() * sizeof(Complex)));
}

void apply_gate(StateVector& psi, const Gate& gate, int target, std::optional<int> control) {
  check_index(psi, target, "target");
  if (control) {
    check_index(psi, *control, "control");
    if (*control == target) throw IndexOutOfRange("control equals target");
  } else if (gate.kind == GateKind::ControlledPhase) {
    throw InvalidArgument("controlled-phase gate needs a control qubit");
  }
  const auto m = gate_matrix(gate);
  auto amps = psi.unitary_view();
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t cmask = control ? (std::size_t{1} << *control) : 0;
  const std::size_t dim = amps.size();
  // Each (i0, i1) pair differs only in the target bit.
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const std::size_t i0 = base + off;
      if ((i0 & cmask) != cmask) continue;
      const std::size_t i1 = i0 + stride;
      const Complex a0 = amps[i0];
      const Complex a1 = amps[i1];
      amps[i0] = m[0] * a0 + m[1] * a1;
      amps[i1] = m[2] * a0 + m[3] * a1;
    }
  }
}

double probability_of(const StateVector& psi, int index, int value) {
  check_index(psi, index, "measured");
  const std::size_t bit = std::size_t{1} << index;
  const std::size_t want = value ? bit : 0;
  double p = 0.0;
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i)
    if ((i & bit) == want) p += std::norm(amps[i]);
  return p;
}

void collapse_qubit(StateVector& psi, int index, int value) {
  const double p = probability_of(psi, index, value);
  if (p < kDegenerateBranch) throw DegenerateState("projected branch has vanishing norm");
  const std::size_t bit = std::size_t{1} << index;
  const std::size_t want = value ? bit : 0;
  const double scale = 1.0 / std::sqrt(p);
  auto amps = psi.unitary_view();
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] = ((i & bit) == want) ? amps[i] * scale : Complex{};
}

int measure_qubit(StateVector& psi, int index, std::mt19937_64& rng) {
  const double p1 = probability_of(psi, index, 1);
  const double p0 = probability_of(psi, index, 0);
  if (p0 < kDegenerateBranch && p1 < kDegenerateBranch)
    throw DegenerateState("both measurement branches vanish");
  const int outcome = uniform01(rng) * (p0 + p1) < p1 ? 1 : 0;
  collapse_qubit(psi, index, outcome);
  return outcome;
}

Complex overlap(std::span<const Complex> psi, std::span<const Complex> phi) {
  if (psi.size() != phi.size())
    throw DimensionMismatch("overlap of vectors with sizes " + std::to_string(psi.size()) +
                            " and " + std::to_string(phi.size()));
  Complex s{};
  for (std::size_t i = 0; i < psi.size(); ++i) s += std::conj(psi[i]) * phi[i];
  return s;
}

Complex overlap(const StateVector& psi, const StateVector& phi) {
  return overlap(psi.amplitudes(), phi.amplitudes());
}

}  // namespace qfci
